import pytest
from hypothesis import given
from hypothesis import strategies as st

from tokenscope.calls import DEFAULT_PENALTIES, Violation
from tokenscope.judge import JudgeScores
from tokenscope.rewards import RewardConfig, trajectory_reward


def fatal():
    return Violation("fatal_invalid_name", DEFAULT_PENALTIES["fatal_invalid_name"])


def test_perfect_episode_totals_one():
    breakdown = trajectory_reward("q", [], [], JudgeScores(10.0, 10.0))
    assert breakdown.total == pytest.approx(1.0)


def test_example_one_clean_syntax():
    # 0.7 * 0.91 + 0.3 * 1.0
    breakdown = trajectory_reward("q", [], [], JudgeScores(9.0, 9.5))
    assert breakdown.total == pytest.approx(0.937, abs=1e-12)
    assert breakdown.r_judge == pytest.approx(0.91)
    assert breakdown.r_correct == 1.0


def test_example_two_with_fatal():
    # 0.7 * 0.36 + 0.3 * 0
    breakdown = trajectory_reward("q", [], [fatal()], JudgeScores(3.0, 6.0))
    assert breakdown.total == pytest.approx(0.252, abs=1e-12)
    assert breakdown.r_correct == 0.0


def test_breakdown_identity_holds():
    cfg = RewardConfig()
    breakdown = trajectory_reward("q", [], [fatal()], JudgeScores(7.0, 2.0), cfg)
    assert abs(breakdown.total - (cfg.w_judge * breakdown.r_judge + cfg.w_correct * breakdown.r_correct)) < 1e-12


def test_weights_validated():
    with pytest.raises(ValueError):
        RewardConfig(w_judge=0.5, w_correct=0.6)


def test_degenerate_weights():
    judge_only = RewardConfig(w_judge=1.0, w_correct=0.0)
    breakdown = trajectory_reward("q", [], [fatal()], JudgeScores(9.0, 9.5), judge_only)
    assert breakdown.total == pytest.approx(breakdown.r_judge)
    correct_only = RewardConfig(w_judge=0.0, w_correct=1.0)
    breakdown = trajectory_reward("q", [], [], JudgeScores(1.0, 1.0), correct_only)
    assert breakdown.total == pytest.approx(breakdown.r_correct)


def test_flag_propagates():
    breakdown = trajectory_reward("q", [], [], JudgeScores(0, 0), flagged=True)
    assert breakdown.flagged


score = st.floats(min_value=0, max_value=10, allow_nan=False)
violation_lists = st.lists(
    st.sampled_from(list(DEFAULT_PENALTIES)).map(
        lambda k: Violation(k, DEFAULT_PENALTIES[k])
    ),
    max_size=8,
)


@given(score, score, violation_lists)
def test_total_in_unit_interval(cov, rel, violations):
    breakdown = trajectory_reward("q", [], violations, JudgeScores(cov, rel))
    assert 0.0 <= breakdown.total <= 1.0
    if any(v.fatal for v in violations):
        assert breakdown.total <= RewardConfig().w_judge + 1e-12
