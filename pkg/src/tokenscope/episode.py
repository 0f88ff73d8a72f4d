"""Finite-horizon planning environment with simulated tool execution.

A state is the conversational history (system prompt with tool definitions,
user query, then alternating assistant actions and tool confirmations). The
transition appends the action and one simulated confirmation per call, and is
fully deterministic: identical (policy script, query, config) reproduce
byte-identical trajectories. An episode ends on the stop action, on an
unparsable action (maximally penalized, nothing to execute), or at the step
limit (default 6 planning steps).

Training rolls out against these simulated confirmations; live serving swaps
in real tool execution but shares the same parse/validate path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .calls import ParsedAction, ToolCall, parse_action_text, validate_calls
from .registry import ToolCatalog, render_tool_list
from .rewards import RewardBreakdown

DEFAULT_MAX_STEPS = 6
DEFAULT_SIMULATION_TEMPLATE = "[simulated] {tool} executed with {args}; results available."


@dataclass(frozen=True)
class Turn:
    role: str  # system | user | assistant | tool
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant", "tool"):
            raise ValueError(f"unknown role {self.role!r}")
        if not self.content:
            raise ValueError("turn content must be non-empty")


@dataclass(frozen=True)
class EpisodeState:
    """Immutable snapshot: turns so far, number of assistant actions taken,
    and the originating query."""

    turns: tuple[Turn, ...]
    step: int
    query: str


@dataclass(frozen=True)
class EnvConfig:
    max_steps: int = DEFAULT_MAX_STEPS
    simulation_template: str = DEFAULT_SIMULATION_TEMPLATE

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass
class Trajectory:
    """One full episode: state snapshots, actions, flattened call history,
    accumulated violations, and (after scoring) the reward breakdown."""

    states: list[EpisodeState]
    actions: list[ParsedAction]
    history: list[ToolCall]
    violations: list = field(default_factory=list)
    reward: RewardBreakdown | None = None
    terminated_by: str = "stop_action"  # stop_action | step_limit

    @property
    def query(self) -> str:
        return self.states[0].query


def build_system_prompt(catalog: ToolCatalog) -> str:
    """Caller system prompt: tool definitions plus the wire format contract."""
    return (
        "You are the tool-call planner of a cryptocurrency analysis assistant. "
        "At each step, decide which tools to invoke next to gather the information "
        "the user's query needs.\n\n"
        "Available tools:\n\n"
        + render_tool_list(catalog)
        + "\nRespond with a JSON array of calls, e.g. "
        '[{"name": "market_analysis", "arguments": {"token": "BTC", "view": "token_detail"}}]. '
        "When no further tools are needed, respond with exactly: no_tool_call"
    )


def init_state(system_prompt: str, query: str) -> EpisodeState:
    if not system_prompt or not query:
        raise ValueError("system prompt and query must be non-empty")
    return EpisodeState(
        turns=(Turn("system", system_prompt), Turn("user", query)),
        step=0,
        query=query,
    )


def simulate_tool_result(call: ToolCall, config: EnvConfig | None = None) -> str:
    """Deterministic confirmation message for a simulated execution."""
    cfg = config or EnvConfig()
    return cfg.simulation_template.format(tool=call.tool, args=format_args(call.args))


def format_args(args: dict) -> str:
    """Render arguments as "{key: value, ...}" in insertion order; strings are
    bare, other scalars JSON-styled."""
    parts = []
    for k, v in args.items():
        if isinstance(v, str):
            parts.append(f"{k}: {v}")
        else:
            parts.append(f"{k}: {json.dumps(v)}")
    return "{" + ", ".join(parts) + "}"


def is_terminal(state: EpisodeState, config: EnvConfig) -> bool:
    if state.step >= config.max_steps:
        return True
    for turn in reversed(state.turns):
        if turn.role == "assistant":
            return parse_action_text(turn.content).kind in ("stop", "fatal_unparsable")
    return False


def step(
    state: EpisodeState, action_text: str, config: EnvConfig | None = None
) -> tuple[EpisodeState, ParsedAction, bool]:
    """Apply one action: append the assistant turn, simulate each call as a
    tool turn, increment the step counter. Returns the new state, the parsed
    action, and whether the episode is now terminal."""
    cfg = config or EnvConfig()
    if is_terminal(state, cfg):
        raise RuntimeError("cannot step a terminal state")
    action = parse_action_text(action_text)
    content = action_text if action_text.strip() else "(unparsable empty action)"
    turns = list(state.turns)
    turns.append(Turn("assistant", content))
    for call in action.calls:
        turns.append(Turn("tool", simulate_tool_result(call, cfg)))
    new_state = replace(state, turns=tuple(turns), step=state.step + 1)
    terminal = action.kind in ("stop", "fatal_unparsable") or new_state.step >= cfg.max_steps
    return new_state, action, terminal


def run_episode(
    act: Callable[[EpisodeState], str],
    query: str,
    catalog: ToolCatalog,
    config: EnvConfig | None = None,
    system_prompt: str | None = None,
) -> Trajectory:
    """Roll one full episode: invoke the policy, transition, validate each
    action against the catalog with the full prior call history, until the
    stop action, an unparsable action, or the step limit."""
    cfg = config or EnvConfig()
    state = init_state(system_prompt or build_system_prompt(catalog), query)
    traj = Trajectory(states=[state], actions=[], history=[], violations=[])
    while True:
        text = act(state)
        state, action, terminal = step(state, text, cfg)
        traj.violations.extend(validate_calls(action, catalog, prior_calls=traj.history))
        traj.history.extend(action.calls)
        traj.states.append(state)
        traj.actions.append(action)
        if terminal:
            if action.kind in ("stop", "fatal_unparsable"):
                traj.terminated_by = "stop_action"
            else:
                traj.terminated_by = "step_limit"
            return traj


def scripted_policy(actions) -> Callable[[EpisodeState], str]:
    """Policy that replays a fixed list of action texts; repeats the last one
    if the episode outlives the script."""
    actions = [str(a) for a in actions]
    if not actions:
        raise ValueError("script must contain at least one action")
    counter = {"i": 0}

    def act(state: EpisodeState) -> str:
        i = min(counter["i"], len(actions) - 1)
        counter["i"] += 1
        return actions[i]

    return act


# ---------------------------------------------------------------------------
# Transcript file format (consumed by `score`, produced by `simulate`)
# ---------------------------------------------------------------------------


def trajectory_to_dict(traj: Trajectory) -> dict:
    doc = {
        "query": traj.query,
        "turns": [{"role": t.role, "content": t.content} for t in traj.states[-1].turns],
        "actions": [
            {
                "kind": a.kind,
                "calls": [{"name": c.tool, "arguments": c.args} for c in a.calls],
                "raw_text": a.raw_text,
            }
            for a in traj.actions
        ],
        "history": [{"name": c.tool, "arguments": c.args} for c in traj.history],
        "terminated_by": traj.terminated_by,
    }
    if traj.reward is not None:
        doc["reward"] = traj.reward.to_dict()
    return doc


def save_transcript(traj: Trajectory, path: str | Path) -> None:
    Path(path).write_text(json.dumps(trajectory_to_dict(traj), indent=2) + "\n")


def load_transcript(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
