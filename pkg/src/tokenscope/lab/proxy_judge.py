"""Deterministic offline stand-in for the judge model.

Scores a plan from the query category and the distinct tools called:
coverage = 10 * min(1, relevant_called / 4), relevance = 10 - 2 * irrelevant
tools, both clamped to [0, 10]; an empty plan on a knowledge question scores
a perfect 10/10 (the correct-empty-plan calibration case). Packaged as a
Backend so it drops in anywhere a live judge endpoint would.
"""

from __future__ import annotations

import json

from ..gateway import Backend, CompletionRequest, CompletionResult
from .features import query_category

RELEVANT_TOOLS = {
    "investment_advice": frozenset(
        {
            "market_analysis",
            "transaction_analysis",
            "code_analysis",
            "project_background_agent",
            "historical_events_agent",
            "crypto_news_agent",
        }
    ),
    "realtime_info": frozenset(
        {
            "market_analysis",
            "transaction_analysis",
            "crypto_news_agent",
            "historical_events_agent",
        }
    ),
    "knowledge_qa": frozenset(),
}

_QUERY_HEADER = "User query:"
_PLAN_HEADER = "Tool-call plan:"


def proxy_scores(query: str, called_tools: set[str]) -> tuple[float, float]:
    category = query_category(query)
    relevant = RELEVANT_TOOLS[category]
    if category == "knowledge_qa" and not called_tools:
        return 10.0, 10.0
    coverage = 10.0 * min(1.0, len(called_tools & relevant) / 4.0)
    relevance = 10.0 - 2.0 * len(called_tools - relevant)
    return _clamp(coverage), _clamp(relevance)


def _clamp(x: float) -> float:
    return max(0.0, min(10.0, x))


class CoverageProxyJudge(Backend):
    """Parses the judge prompt it receives and answers with deterministic
    scores in the judge's output format."""

    def complete(self, request: CompletionRequest) -> CompletionResult:
        query, called = self._extract(request.last_user_content())
        coverage, relevance = proxy_scores(query, called)
        text = json.dumps({"information_coverage": coverage, "relevance": relevance})
        return CompletionResult(text=text, finish_reason="stop")

    @staticmethod
    def _extract(user_content: str) -> tuple[str, set[str]]:
        query, plan_text = user_content, ""
        if _QUERY_HEADER in user_content and _PLAN_HEADER in user_content:
            after = user_content.split(_QUERY_HEADER, 1)[1]
            query, plan_text = after.split(_PLAN_HEADER, 1)
            query = query.strip()
            plan_text = plan_text.strip()
        called: set[str] = set()
        if plan_text.startswith("["):
            try:
                for item in json.loads(plan_text):
                    if isinstance(item, dict) and isinstance(item.get("name"), str):
                        called.add(item["name"])
            except json.JSONDecodeError:
                pass
        return query, called
