"""Hand-built feature map standing in for an LLM's representation of state.

Features are deterministic functions of the conversation: query-category
one-hots, keyword flags, one already-called indicator per catalog tool, and
the normalized step index. All values live in [0, 1] and the dimension is
fixed for a given catalog.
"""

from __future__ import annotations

import re

import numpy as np

from .. import calls as _calls
from ..episode import EpisodeState
from ..registry import ToolCatalog

FEATURE_SCHEMA_VERSION = "1"

CATEGORIES = ("realtime_info", "investment_advice", "knowledge_qa")

ADVICE_CUES = (
    "should i",
    "good investment",
    "worth buying",
    "worth investing",
    "invest in",
    "investing in",
    "buy or sell",
    "advice",
    "portfolio",
    "allocate",
    "safe to invest",
    "good buy",
    "undervalued",
    "overvalued",
    "worth holding",
)
KNOWLEDGE_CUES = (
    "what is",
    "what are",
    "what does",
    "explain",
    "how does",
    "how do",
    "define",
    "definition",
    "difference between",
    "meaning of",
    "why do",
    "why is",
)
REALTIME_CUES = (
    "price",
    "news",
    "volume",
    "today",
    "current",
    "latest",
    "right now",
    "gainer",
    "loser",
    "whale",
    "transfer",
    "transaction",
    "market overview",
    "trending",
    "candle",
    "k-line",
    "kline",
    "chart",
    "24h",
    "recent",
    "this week",
    "past week",
)

_TOKEN_WORDS = (
    "btc|bitcoin|eth|ethereum|sol|solana|doge|dogecoin|ada|cardano|xrp|ripple|"
    "usdc|usdt|tether|bnb|link|chainlink|matic|polygon|shib|pepe|uni|uniswap|"
    "arb|arbitrum|avax|avalanche|dot|polkadot|ltc|litecoin|atom|cosmos|near|"
    "apt|aptos|optimism|aave|ton|sui|tron|trx"
)
_TOKEN_RE = re.compile(r"\b(" + _TOKEN_WORDS + r")\b")

# Step index is normalized against the default horizon so the feature stays
# in [0, 1] regardless of the live config.
_STEP_NORM = 6.0


def asks_advice(query: str) -> bool:
    q = query.lower()
    return any(cue in q for cue in ADVICE_CUES)


def asks_definition(query: str) -> bool:
    q = query.lower()
    return any(cue in q for cue in KNOWLEDGE_CUES)


def mentions_token(query: str) -> bool:
    return bool(_TOKEN_RE.search(query.lower()))


def query_category(query: str) -> str:
    """Deterministic three-way classification.

    Advice cues dominate (an advice question about "right now" is still
    advice); knowledge cues only count when no realtime cue co-occurs
    ("what is the current price" is a realtime query)."""
    q = query.lower()
    if any(cue in q for cue in ADVICE_CUES):
        return "investment_advice"
    has_realtime = any(cue in q for cue in REALTIME_CUES)
    if any(cue in q for cue in KNOWLEDGE_CUES) and not has_realtime:
        return "knowledge_qa"
    return "realtime_info"


def feature_names(catalog: ToolCatalog) -> list[str]:
    return (
        ["bias", "cat_realtime", "cat_advice", "cat_knowledge", "kw_token", "kw_advice", "kw_definition"]
        + [f"called_{name}" for name in catalog.names]
        + ["step_frac"]
    )


def called_tools(state: EpisodeState) -> set[str]:
    """Tool names already invoked in this episode, recovered from the
    assistant turns."""
    seen: set[str] = set()
    for turn in state.turns:
        if turn.role != "assistant":
            continue
        action = _calls.parse_action_text(turn.content)
        for call in action.calls:
            seen.add(call.tool)
    return seen


def featurize(state: EpisodeState, catalog: ToolCatalog) -> np.ndarray:
    category = query_category(state.query)
    called = called_tools(state)
    vec = [
        1.0,
        1.0 if category == "realtime_info" else 0.0,
        1.0 if category == "investment_advice" else 0.0,
        1.0 if category == "knowledge_qa" else 0.0,
        1.0 if mentions_token(state.query) else 0.0,
        1.0 if asks_advice(state.query) else 0.0,
        1.0 if asks_definition(state.query) else 0.0,
    ]
    vec.extend(1.0 if name in called else 0.0 for name in catalog.names)
    vec.append(min(1.0, state.step / _STEP_NORM))
    return np.asarray(vec, dtype=np.float64)
