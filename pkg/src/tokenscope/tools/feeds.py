"""News/events feed and web-search clients used by the report agents.

Same dual-mode pattern as the other external clients: live HTTP against the
configured bases, or recorded-fixture replay.
"""

from __future__ import annotations

import os
from datetime import datetime, timezone

import httpx

from ..errors import UpstreamError
from .fixtures import FixtureStore


def parse_when(value) -> datetime:
    """Accept ISO-8601 strings (Z suffix included) or epoch seconds."""
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(float(value), tz=timezone.utc)
    text = str(value).replace("Z", "+00:00")
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


class NewsClient:
    """CoinDesk-style feed: dated historical events per token and recent
    market news, optionally topic-filtered."""

    def __init__(
        self,
        store: FixtureStore | None = None,
        base_url: str | None = None,
        api_key: str | None = None,
    ):
        self.store = store or FixtureStore()
        self.base_url = (base_url or os.environ.get("NEWS_API_BASE", "")).rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get("NEWS_API_KEY", "")

    def events(self, token: str) -> list[dict]:
        request = {"op": "events", "token": token.upper()}
        return self.store.fetch(
            "news", request, lambda: self._live("/events", {"token": token.upper()})
        )

    def news(self, topic: str | None = None) -> list[dict]:
        request = {"op": "news", "topic": topic}
        params = {"topic": topic} if topic else {}
        return self.store.fetch("news", request, lambda: self._live("/news", params))

    def _live(self, path: str, params: dict) -> list[dict]:
        if not self.base_url:
            raise UpstreamError("NEWS_API_BASE not configured and fixture mode is off")
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = httpx.get(
                f"{self.base_url}{path}", params=params, headers=headers, timeout=30
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise UpstreamError(f"news API failure: {exc}") from exc
        return response.json()


class SearchClient:
    """Web search returning (url, title, text) documents."""

    def __init__(self, store: FixtureStore | None = None, base_url: str | None = None):
        self.store = store or FixtureStore()
        self.base_url = (base_url or os.environ.get("SEARCH_API_BASE", "")).rstrip("/")

    def search(self, query: str) -> list[dict]:
        request = {"op": "search", "query": query}
        return self.store.fetch("search", request, lambda: self._live(query))

    def _live(self, query: str) -> list[dict]:
        if not self.base_url:
            raise UpstreamError("SEARCH_API_BASE not configured and fixture mode is off")
        try:
            response = httpx.get(f"{self.base_url}/search", params={"q": query}, timeout=30)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise UpstreamError(f"search API failure: {exc}") from exc
        return response.json()
