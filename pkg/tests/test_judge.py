import pytest
from hypothesis import given
from hypothesis import strategies as st

from tokenscope.calls import ToolCall
from tokenscope.errors import JudgeUnavailableError
from tokenscope.gateway import ScriptedBackend
from tokenscope.judge import (
    NO_TOOLS_SENTINEL,
    JudgeConfig,
    JudgeScores,
    build_judge_prompt,
    judge,
    parse_judge_response,
    semantic_reward,
)

HISTORY = [
    ToolCall("market_analysis", {"token": "BTC", "view": "token_detail"}),
    ToolCall("crypto_news_agent", {"topic": "bitcoin"}),
]


def test_prompt_has_three_calibration_examples(catalog):
    messages = build_judge_prompt("Is Bitcoin a good investment right now?", HISTORY, catalog)
    system = messages[0].content
    assert system.count("Example ") == 3
    assert '"information_coverage": 9.0, "relevance": 9.5' in system
    assert '"information_coverage": 3.0, "relevance": 6.0' in system
    assert '"information_coverage": 10.0, "relevance": 10.0' in system
    assert "Can you explain what blockchain technology is?" in system


def test_prompt_scale_anchors_order(catalog):
    system = build_judge_prompt("q", [], catalog)[0].content
    assert system.index("9-10: Excellent") < system.index("0-2: Very Poor")


def test_prompt_contains_all_tool_names(catalog):
    system = build_judge_prompt("q", [], catalog)[0].content
    for name in catalog.names:
        assert name in system


def test_prompt_empty_history_sentinel(catalog):
    messages = build_judge_prompt("q", [], catalog)
    assert NO_TOOLS_SENTINEL in messages[1].content


def test_prompt_deterministic(catalog):
    a = build_judge_prompt("q", HISTORY, catalog)
    b = build_judge_prompt("q", HISTORY, catalog)
    assert [(m.role, m.content) for m in a] == [(m.role, m.content) for m in b]


def test_parse_plain_object():
    scores = parse_judge_response('{"information_coverage": 9.0, "relevance": 9.5}')
    assert scores == JudgeScores(9.0, 9.5)


def test_parse_clamps_out_of_range():
    scores = parse_judge_response('Here you go: {"information_coverage": 12, "relevance": -1}')
    assert scores == JudgeScores(10.0, 0.0)


def test_parse_prose_is_unparsable():
    assert parse_judge_response("I cannot judge this.") is None


def test_parse_inside_fences_and_prose():
    text = 'Sure!\n```json\n{"information_coverage": 7.5, "relevance": 8.0}\n```\nHope that helps.'
    assert parse_judge_response(text) == JudgeScores(7.5, 8.0)


def test_parse_non_numeric_fields_unparsable():
    assert parse_judge_response('{"information_coverage": "high", "relevance": 9}') is None


def test_parse_skips_objects_without_fields():
    text = '{"note": "ok"} then {"information_coverage": 4, "relevance": 5}'
    assert parse_judge_response(text) == JudgeScores(4.0, 5.0)


def test_judge_happy_path(catalog):
    backend = ScriptedBackend(['{"information_coverage": 9.0, "relevance": 9.5}'])
    verdict = judge("q", HISTORY, catalog, backend)
    assert verdict.scores == JudgeScores(9.0, 9.5)
    assert not verdict.flagged


def test_judge_retry_then_success(catalog):
    backend = ScriptedBackend(["hmm", '{"information_coverage": 5, "relevance": 5}'])
    verdict = judge("q", HISTORY, catalog, backend)
    assert verdict.scores == JudgeScores(5.0, 5.0)


def test_judge_fail_policy(catalog):
    backend = ScriptedBackend(["a", "b", "c"])
    with pytest.raises(JudgeUnavailableError):
        judge("q", HISTORY, catalog, backend, JudgeConfig(unparsable_policy="fail"))


def test_judge_zero_with_flag_policy(catalog):
    backend = ScriptedBackend(["a", "b", "c"])
    verdict = judge("q", HISTORY, catalog, backend, JudgeConfig(unparsable_policy="zero_with_flag"))
    assert verdict.scores == JudgeScores(0.0, 0.0)
    assert verdict.flagged


def test_semantic_reward_paper_examples():
    assert semantic_reward(JudgeScores(10.0, 10.0)) == pytest.approx(1.0)
    assert semantic_reward(JudgeScores(9.0, 9.5)) == pytest.approx(0.91)
    assert semantic_reward(JudgeScores(3.0, 6.0)) == pytest.approx(0.36)


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        JudgeConfig(w_cov=0.9, w_rel=0.2)


scores_strategy = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)


@given(scores_strategy, scores_strategy, scores_strategy)
def test_semantic_reward_monotone(cov, rel, bump):
    base = semantic_reward(JudgeScores(cov, rel))
    assert 0.0 <= base <= 1.0
    assert semantic_reward(JudgeScores(min(10.0, cov + bump), rel)) >= base
    assert semantic_reward(JudgeScores(cov, min(10.0, rel + bump))) >= base
