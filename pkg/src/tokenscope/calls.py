"""Parse caller output into structured tool calls and grade schema adherence.

The caller model emits either a JSON array of {"name", "arguments"} objects,
the literal stop token ``no_tool_call``, or garbage. Parsing is total: every
input maps to a ParsedAction, never an exception. Rule-based checks then turn
schema offenses into Violations, and the correctness score folds the penalty
sum into [0, 1]: max(0, (C_max - sum(p_v)) / C_max) with the default budget
C_max = 3.0. Any fatal violation (unknown tool, unparsable action) carries the
full budget and forces the score to 0.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .registry import ToolCatalog, lookup

STOP_TOKEN = "no_tool_call"

# Penalty table. The budget C_MAX = 3.0; three major errors exhaust it, and a
# redundant (duplicate) call costs half a major error.
C_MAX = 3.0
FATAL_KINDS = ("fatal_invalid_name", "fatal_unparsable")
DEFAULT_PENALTIES = {
    "fatal_invalid_name": C_MAX,
    "fatal_unparsable": C_MAX,
    "missing_param": 1.0,
    "invalid_param": 1.0,
    "wrong_type": 1.0,
    "duplicate_call": 0.5,
}

# Stop token may be wrapped in whitespace or light markup (backticks, quotes,
# asterisks, a trailing period) but nothing else.
_STOP_RE = re.compile(r'^[\s`*_"\']*no_tool_call[\s`*_"\'.]*$')
_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)

Scalar = str | int | float | bool


@dataclass(frozen=True)
class ToolCall:
    """One structured call: tool name plus a flat argument map."""

    tool: str
    args: dict = field(default_factory=dict)

    def key(self) -> tuple:
        """Normalized identity used for duplicate detection: keys sorted,
        numbers canonicalized (1 == 1.0), strings verbatim."""
        return (self.tool, tuple(sorted((k, _norm_value(v)) for k, v in self.args.items())))


@dataclass(frozen=True)
class ParsedAction:
    kind: str  # calls | stop | fatal_unparsable
    calls: tuple[ToolCall, ...] = ()
    raw_text: str = ""

    def __post_init__(self):
        if self.kind == "calls" and not self.calls:
            raise ValueError("kind=calls requires at least one call")
        if self.kind != "calls" and self.calls:
            raise ValueError(f"kind={self.kind} must carry no calls")


@dataclass(frozen=True)
class Violation:
    kind: str
    penalty: float
    detail: str = ""

    @property
    def fatal(self) -> bool:
        return self.kind in FATAL_KINDS


@dataclass(frozen=True)
class CorrectnessConfig:
    c_max: float = C_MAX
    penalties: dict = field(default_factory=lambda: dict(DEFAULT_PENALTIES))

    def __post_init__(self):
        if self.c_max <= 0:
            raise ValueError("c_max must be positive")
        for kind in FATAL_KINDS:
            if self.penalties.get(kind, self.c_max) < self.c_max:
                raise ValueError(f"fatal penalty for {kind} must be >= c_max")


def _norm_value(v):
    if isinstance(v, bool):
        return ("b", v)
    if isinstance(v, (int, float)):
        return ("n", float(v))
    if isinstance(v, str):
        return ("s", v)
    # Non-scalar leaked through parsing; normalize structurally so duplicate
    # detection stays total. Validation flags it as wrong_type separately.
    return ("j", json.dumps(v, sort_keys=True))


def serialize_calls(calls) -> str:
    """Canonical wire encoding: a JSON array of {name, arguments} objects."""
    return json.dumps(
        [{"name": c.tool, "arguments": c.args} for c in calls],
        separators=(", ", ": "),
    )


def parse_action_text(text: str) -> ParsedAction:
    """Total parse of caller output.

    Recognizes the stop token (optionally wrapped in whitespace/markup), a
    JSON call list (optionally inside a code fence; a bare single object is
    accepted as a one-call list; an empty array means stop). Everything else
    is fatal_unparsable.
    """
    raw = text if isinstance(text, str) else ""
    stripped = raw.strip()
    if _STOP_RE.match(stripped):
        return ParsedAction(kind="stop", raw_text=raw)

    candidate = stripped
    fenced = _FENCE_RE.search(stripped)
    if fenced:
        candidate = fenced.group(1).strip()
    payload = _try_json(candidate)
    if payload is None:
        # Prose around a JSON array, e.g. "Plan: [...]" — try the outermost
        # bracketed slice before giving up.
        start, end = candidate.find("["), candidate.rfind("]")
        if start != -1 and end > start:
            payload = _try_json(candidate[start : end + 1])
    if payload is None:
        return ParsedAction(kind="fatal_unparsable", raw_text=raw)

    if isinstance(payload, dict):
        payload = [payload]
    if not isinstance(payload, list):
        return ParsedAction(kind="fatal_unparsable", raw_text=raw)
    if not payload:
        return ParsedAction(kind="stop", raw_text=raw)

    calls = []
    for item in payload:
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            return ParsedAction(kind="fatal_unparsable", raw_text=raw)
        args = item.get("arguments", {})
        if args is None:
            args = {}
        if not isinstance(args, dict):
            return ParsedAction(kind="fatal_unparsable", raw_text=raw)
        calls.append(ToolCall(tool=item["name"], args=dict(args)))
    return ParsedAction(kind="calls", calls=tuple(calls), raw_text=raw)


def _try_json(text: str):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, ValueError):
        return None


def validate_calls(
    action: ParsedAction,
    catalog: ToolCatalog,
    prior_calls: list[ToolCall] | tuple[ToolCall, ...] = (),
) -> list[Violation]:
    """Rule-based schema checks over one action, seen against episode history.

    Emits one Violation per offense in document order: unknown tool,
    missing required param, arg key not in schema, type mismatch, and
    duplicate of any call already made earlier in the episode or earlier in
    this same action.
    """
    if action.kind == "fatal_unparsable":
        return [
            Violation(
                kind="fatal_unparsable",
                penalty=DEFAULT_PENALTIES["fatal_unparsable"],
                detail=f"unparsable action: {action.raw_text[:80]!r}",
            )
        ]
    if action.kind == "stop":
        return []

    violations: list[Violation] = []
    seen = {c.key() for c in prior_calls}
    for i, call in enumerate(action.calls):
        where = f"call {i}: {call.tool}"
        spec = lookup(catalog, call.tool)
        if spec is None:
            violations.append(
                Violation(
                    kind="fatal_invalid_name",
                    penalty=DEFAULT_PENALTIES["fatal_invalid_name"],
                    detail=f"{where} is not in the catalog",
                )
            )
        else:
            for p in spec.required_params:
                if p.name not in call.args:
                    violations.append(
                        Violation(
                            kind="missing_param",
                            penalty=DEFAULT_PENALTIES["missing_param"],
                            detail=f"{where} missing required param {p.name!r}",
                        )
                    )
            for key, value in call.args.items():
                p = spec.param(key)
                if p is None:
                    violations.append(
                        Violation(
                            kind="invalid_param",
                            penalty=DEFAULT_PENALTIES["invalid_param"],
                            detail=f"{where} has unknown param {key!r}",
                        )
                    )
                elif not _value_matches(value, p):
                    violations.append(
                        Violation(
                            kind="wrong_type",
                            penalty=DEFAULT_PENALTIES["wrong_type"],
                            detail=f"{where} param {key!r}={value!r} does not match kind {p.kind}",
                        )
                    )
        key = call.key()
        if key in seen:
            violations.append(
                Violation(
                    kind="duplicate_call",
                    penalty=DEFAULT_PENALTIES["duplicate_call"],
                    detail=f"{where} repeats an identical earlier call",
                )
            )
        else:
            seen.add(key)
    return violations


def _value_matches(value, p) -> bool:
    if p.kind == "string":
        return isinstance(value, str)
    if p.kind == "boolean":
        return isinstance(value, bool)
    if p.kind == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if p.kind == "number":
        # Integers widen to number; bool is excluded despite being an int.
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if p.kind == "enum":
        return isinstance(value, str) and value in (p.enum_values or ())
    return False


def correctness_score(violations, config: CorrectnessConfig | None = None) -> float:
    """max(0, (c_max - sum of penalties) / c_max), re-priced by the config's
    penalty table when it carries the violation's kind."""
    cfg = config or CorrectnessConfig()
    total = sum(cfg.penalties.get(v.kind, v.penalty) for v in violations)
    return max(0.0, (cfg.c_max - total) / cfg.c_max)
