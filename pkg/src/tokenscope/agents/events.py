"""Historical events agent: fetch dated events in a lookback window, then
analyze each for price impact, manipulation risk, and crisis response."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from ..gateway import Backend
from ..tools.feeds import NewsClient, parse_when
from .shared import load_template, structured_completion

_FALLBACK_NOTE = "analysis unavailable"


@dataclass(frozen=True)
class HistoricalEventRecord:
    date: str
    title: str
    description: str
    price_impact: str
    manipulation_risk: str
    crisis_response: str

    def to_dict(self) -> dict:
        return {
            "date": self.date,
            "title": self.title,
            "description": self.description,
            "impact_analysis": {
                "price_impact": self.price_impact,
                "manipulation_risk": self.manipulation_risk,
                "crisis_response": self.crisis_response,
            },
        }


def he_fetch(
    client: NewsClient, token: str, window_days: int = 365, now: datetime | None = None
) -> list[dict]:
    """Events within the lookback window, date-ascending."""
    if window_days < 1:
        raise ValueError("window_days must be >= 1")
    now = now or datetime.now(timezone.utc)
    cutoff = now - timedelta(days=window_days)
    events = [e for e in client.events(token) if parse_when(e["date"]) >= cutoff]
    events.sort(key=lambda e: parse_when(e["date"]))
    return events


def he_analyze(events: list[dict], backend: Backend, token: str = "") -> tuple[list[HistoricalEventRecord], bool]:
    """One record per event with all three impact notes. Returns
    (records, degraded)."""
    if not events:
        raise ValueError("he_analyze requires at least one event")
    listing = "\n".join(
        f"[{i}] {e['date']} — {e['title']}: {e.get('description', '')}" for i, e in enumerate(events)
    )
    prompt = load_template("he_analyze").substitute(token=token or "the token", events=listing)
    parsed, _raw = structured_completion(prompt, backend)
    degraded = not (isinstance(parsed, list) and len(parsed) == len(events))
    records = []
    for i, event in enumerate(events):
        notes = parsed[i] if not degraded and isinstance(parsed[i], dict) else {}
        records.append(
            HistoricalEventRecord(
                date=str(event["date"]),
                title=event["title"],
                description=event.get("description", ""),
                price_impact=str(notes.get("price_impact") or _FALLBACK_NOTE),
                manipulation_risk=str(notes.get("manipulation_risk") or _FALLBACK_NOTE),
                crisis_response=str(notes.get("crisis_response") or _FALLBACK_NOTE),
            )
        )
    return records, degraded


def he_report(
    token: str,
    client: NewsClient,
    backend: Backend,
    window_days: int = 365,
    now: datetime | None = None,
) -> dict:
    events = he_fetch(client, token, window_days, now)
    if not events:
        return {"token": token.upper(), "window_days": window_days, "events": [], "degraded": False}
    records, degraded = he_analyze(events, backend, token)
    return {
        "token": token.upper(),
        "window_days": window_days,
        "events": [r.to_dict() for r in records],
        "degraded": degraded,
    }
