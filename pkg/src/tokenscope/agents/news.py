"""Crypto news agent: fetch recent items (newest first), annotate each with
sentiment / affected assets / impact magnitude, and synthesize an outlook."""

from __future__ import annotations

from dataclasses import dataclass

from ..gateway import Backend
from ..tools.feeds import NewsClient, parse_when
from .shared import load_template, structured_completion

SENTIMENTS = ("bullish", "bearish", "neutral")
MAGNITUDES = ("low", "medium", "high")


@dataclass(frozen=True)
class NewsItem:
    published_at: str
    headline: str
    category: str
    sentiment: str
    affected_assets: tuple[str, ...]
    magnitude: str

    def to_dict(self) -> dict:
        return {
            "published_at": self.published_at,
            "headline": self.headline,
            "category": self.category,
            "sentiment": self.sentiment,
            "affected_assets": list(self.affected_assets),
            "magnitude": self.magnitude,
        }


@dataclass(frozen=True)
class NewsDigest:
    items: tuple[NewsItem, ...]
    synthesis: str
    degraded: bool = False

    def __post_init__(self):
        stamps = [parse_when(i.published_at) for i in self.items]
        if stamps != sorted(stamps, reverse=True):
            raise ValueError("digest items must be newest-first")

    def to_dict(self) -> dict:
        return {
            "items": [i.to_dict() for i in self.items],
            "synthesis": self.synthesis,
            "degraded": self.degraded,
        }


def cn_fetch(client: NewsClient, topic: str | None = None, limit: int = 10) -> list[dict]:
    """Up to `limit` raw items, newest first. No topic means the global feed."""
    if not (1 <= limit <= 50):
        raise ValueError("limit must be in [1, 50]")
    items = sorted(client.news(topic), key=lambda i: parse_when(i["published_at"]), reverse=True)
    return items[:limit]


def cn_analyze(items: list[dict], backend: Backend) -> NewsDigest:
    """Annotate every item and synthesize; item count is always preserved."""
    if not items:
        raise ValueError("cn_analyze requires at least one item")
    listing = "\n".join(
        f"[{i}] {it['published_at']} ({it.get('category', 'general')}) {it['headline']}"
        for i, it in enumerate(items)
    )
    prompt = load_template("cn_analyze").substitute(items=listing)
    parsed, _raw = structured_completion(prompt, backend)
    annotations = parsed.get("annotations") if isinstance(parsed, dict) else None
    degraded = not (isinstance(annotations, list) and len(annotations) == len(items))
    out = []
    for i, item in enumerate(items):
        note = annotations[i] if not degraded and isinstance(annotations[i], dict) else {}
        sentiment = note.get("sentiment")
        magnitude = note.get("magnitude")
        assets = note.get("affected_assets")
        out.append(
            NewsItem(
                published_at=str(item["published_at"]),
                headline=item["headline"],
                category=item.get("category", "general"),
                sentiment=sentiment if sentiment in SENTIMENTS else "neutral",
                affected_assets=tuple(assets) if isinstance(assets, list) else (),
                magnitude=magnitude if magnitude in MAGNITUDES else "low",
            )
        )
    synthesis = ""
    if isinstance(parsed, dict):
        synthesis = str(parsed.get("synthesis") or "")
    if not synthesis:
        synthesis = "Synthesis unavailable; raw items annotated with defaults."
        degraded = True
    return NewsDigest(items=tuple(out), synthesis=synthesis, degraded=degraded)


def cn_report(
    client: NewsClient, backend: Backend, topic: str | None = None, limit: int = 10
) -> dict:
    items = cn_fetch(client, topic, limit)
    if not items:
        return {"topic": topic, "items": [], "synthesis": "No recent news found.", "degraded": False}
    digest = cn_analyze(items, backend)
    doc = digest.to_dict()
    doc["topic"] = topic
    return doc
