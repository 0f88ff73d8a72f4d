"""LLM-as-a-judge scoring of a tool-call plan.

Builds the rubric prompt (role framing, tool list, the two criteria, scale
anchors, three calibration examples, output format), invokes a judge backend,
parses the structured scores out of whatever prose surrounds them, and maps
them to the semantic reward (w_cov * S_cov + w_rel * S_rel) / 10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .calls import ToolCall, serialize_calls
from .errors import JudgeUnavailableError
from .gateway import Backend, CompletionRequest, Message
from .registry import ToolCatalog, render_tool_list

NO_TOOLS_SENTINEL = "(no tools called)"

SCALE_ANCHORS = """Scoring scale (both criteria, floating-point 0 to 10):
- 9-10: Excellent — comprehensive coverage of all relevant dimensions (coverage), or perfect precision with no unnecessary tools (relevance)
- 7-8: Good — covers most important aspects with minor gaps (coverage), or mostly relevant with minor issues (relevance)
- 5-6: Adequate — covers some key aspects but missing important dimensions (coverage), or generally relevant but with notable issues (relevance)
- 3-4: Poor — significant gaps in coverage (coverage), or contains irrelevant or misapplied tools (relevance)
- 0-2: Very Poor — minimal information gathering (coverage), or completely inappropriate tool selection (relevance)"""

CALIBRATION_EXAMPLES = """Calibration examples:

Example 1 — high-quality comprehensive plan
Query: "Is Bitcoin a good investment right now?"
Tool calls: [get_crypto_price, get_recent_news, kline_analysis, project_background_agent, transaction_analysis]
Scores: {"information_coverage": 9.0, "relevance": 9.5}
Why: multiple complementary tools covering market data, news sentiment, technical analysis, fundamental background, and on-chain activity — the ideal behavior for a complex investment query.

Example 2 — low-quality minimal plan
Query: "Is Bitcoin a good investment right now?"
Tool calls: [get_crypto_price]
Scores: {"information_coverage": 3.0, "relevance": 6.0}
Why: the price tool is relevant, but one-dimensional information is inadequate for an investment decision.

Example 3 — correct empty plan
Query: "Can you explain what blockchain technology is?"
Tool calls: [] (empty list)
Scores: {"information_coverage": 10.0, "relevance": 10.0}
Why: the question is answerable from general knowledge; calling no tools is exactly right and must not be penalized."""

OUTPUT_FORMAT = (
    "Respond with exactly one JSON object and nothing else:\n"
    '{"information_coverage": <number 0-10>, "relevance": <number 0-10>}'
)

FORMAT_REMINDER = (
    "Your previous reply could not be parsed. Respond with ONLY the JSON object "
    '{"information_coverage": <number>, "relevance": <number>} — no prose, no markdown.'
)


@dataclass(frozen=True)
class JudgeScores:
    """Coverage and relevance on the 0-10 scale, clamped after parsing."""

    coverage: float
    relevance: float

    def __post_init__(self):
        object.__setattr__(self, "coverage", _clamp(self.coverage))
        object.__setattr__(self, "relevance", _clamp(self.relevance))


@dataclass(frozen=True)
class JudgeConfig:
    w_cov: float = 0.8
    w_rel: float = 0.2
    parse_retries: int = 2
    unparsable_policy: str = "fail"  # fail | zero_with_flag

    def __post_init__(self):
        if abs(self.w_cov + self.w_rel - 1.0) > 1e-9:
            raise ValueError("w_cov + w_rel must equal 1")
        if self.unparsable_policy not in ("fail", "zero_with_flag"):
            raise ValueError(f"unknown unparsable_policy {self.unparsable_policy!r}")


@dataclass(frozen=True)
class JudgeVerdict:
    """Scores plus a flag marking trajectories scored (0,0) only because the
    judge never produced parsable output."""

    scores: JudgeScores
    flagged: bool = False


def _clamp(x: float) -> float:
    return max(0.0, min(10.0, float(x)))


def build_judge_prompt(query: str, history, catalog: ToolCatalog) -> list[Message]:
    """Assemble the full judge prompt. Deterministic: identical inputs yield
    identical bytes."""
    system = "\n\n".join(
        [
            "You are an impartial judge evaluating the tool-call plan of a "
            "tool-augmented AI assistant for cryptocurrency investment analysis. "
            "Given the user's query and the plan (the ordered tool calls the "
            "assistant chose), you assess the plan's quality from an investment-"
            "analysis perspective. You do not execute tools or answer the query.",
            "Available tools:\n\n" + render_tool_list(catalog).rstrip(),
            "Evaluation criteria:\n"
            "1. Information coverage (0-10): the breadth and completeness of the plan. "
            "Does it address the relevant information dimensions (market data, on-chain "
            "activity, security, fundamentals, historical context, news)? Could the selected "
            "tools collectively support an informed decision, relative to the query's "
            "complexity? Reward multi-faceted strategies for complex queries.\n"
            "2. Relevance (0-10): the precision of the plan. Is every chosen tool and its "
            "arguments directly appropriate to the query? Penalize irrelevant, redundant, "
            "or misused tools. Comprehensive coverage must not come at the cost of "
            "relevance: every call should serve a clear purpose.",
            SCALE_ANCHORS,
            CALIBRATION_EXAMPLES,
            OUTPUT_FORMAT,
        ]
    )
    if history:
        plan = serialize_calls(history)
    else:
        plan = NO_TOOLS_SENTINEL
    user = f"User query:\n{query}\n\nTool-call plan:\n{plan}"
    return [Message("system", system), Message("user", user)]


def parse_judge_response(text: str) -> JudgeScores | None:
    """Extract the first JSON object carrying both score fields, tolerating
    surrounding prose and markdown fencing. Returns None when unparsable."""
    if not isinstance(text, str):
        return None
    decoder = json.JSONDecoder()
    idx = text.find("{")
    while idx != -1:
        try:
            obj, _ = decoder.raw_decode(text, idx)
        except json.JSONDecodeError:
            idx = text.find("{", idx + 1)
            continue
        if isinstance(obj, dict) and "information_coverage" in obj and "relevance" in obj:
            cov, rel = obj["information_coverage"], obj["relevance"]
            if _numeric(cov) and _numeric(rel):
                return JudgeScores(coverage=float(cov), relevance=float(rel))
            return None  # first matching object wins; non-numeric fields are a failure
        idx = text.find("{", idx + 1)
    return None


def _numeric(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def judge(
    query: str,
    history: list[ToolCall] | tuple[ToolCall, ...],
    catalog: ToolCatalog,
    backend: Backend,
    config: JudgeConfig | None = None,
    model_id: str = "judge",
) -> JudgeVerdict:
    """One judge call with parse retries.

    Uses greedy sampling for score stability. On unparsable output, retries
    up to config.parse_retries with a format reminder appended; if still
    unparsable, applies the configured policy.
    """
    cfg = config or JudgeConfig()
    messages = build_judge_prompt(query, history, catalog)
    attempts = 1 + cfg.parse_retries
    for attempt in range(attempts):
        result = backend.complete(
            CompletionRequest(model_id=model_id, messages=tuple(messages), mode="greedy")
        )
        scores = parse_judge_response(result.text)
        if scores is not None:
            return JudgeVerdict(scores=scores)
        if attempt < attempts - 1:
            messages = messages + [
                Message("assistant", result.text or "(empty)"),
                Message("user", FORMAT_REMINDER),
            ]
    if cfg.unparsable_policy == "zero_with_flag":
        return JudgeVerdict(scores=JudgeScores(0.0, 0.0), flagged=True)
    raise JudgeUnavailableError(
        f"judge produced no parsable scores after {attempts} attempts"
    )


def semantic_reward(scores: JudgeScores, config: JudgeConfig | None = None) -> float:
    """(w_cov * coverage + w_rel * relevance) / 10, in [0, 1]."""
    cfg = config or JudgeConfig()
    return (cfg.w_cov * scores.coverage + cfg.w_rel * scores.relevance) / 10.0
