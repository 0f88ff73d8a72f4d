"""Exchange market data: per-token detail and ranked market overviews.

The live path speaks a Binance-style REST API (/ticker/24hr, /klines);
replay mode serves the recorded responses through the same parsing and
ranking code, so fixtures exercise everything except the socket.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import httpx

from ..errors import TokenNotFoundError, UpstreamError
from .fixtures import FixtureStore

QUOTE = "USDT"
DEFAULT_INTERVAL = "1d"
DEFAULT_CANDLES = 30


@dataclass(frozen=True)
class Candle:
    open_time: int  # epoch milliseconds
    open: float
    high: float
    low: float
    close: float
    volume: float

    def __post_init__(self):
        body_high = max(self.open, self.close)
        body_low = min(self.open, self.close)
        if not (self.high >= body_high >= body_low >= self.low):
            raise ValueError(
                f"candle violates OHLC ordering: o={self.open} h={self.high} "
                f"l={self.low} c={self.close}"
            )


@dataclass(frozen=True)
class MarketSnapshot:
    symbol: str
    price: float
    change_24h: float  # percent
    volume_24h: float  # quote currency
    candles: tuple[Candle, ...]

    def __post_init__(self):
        times = [c.open_time for c in self.candles]
        if times != sorted(times):
            raise ValueError("candles must be time-ascending")

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "price": self.price,
            "change_24h": self.change_24h,
            "volume_24h": self.volume_24h,
            "candles": [
                {
                    "open_time": c.open_time,
                    "open": c.open,
                    "high": c.high,
                    "low": c.low,
                    "close": c.close,
                    "volume": c.volume,
                }
                for c in self.candles
            ],
        }


@dataclass(frozen=True)
class MarketOverview:
    top_gainers: tuple[tuple[str, float], ...]
    top_losers: tuple[tuple[str, float], ...]
    top_volume: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        return {
            "top_gainers": [list(x) for x in self.top_gainers],
            "top_losers": [list(x) for x in self.top_losers],
            "top_volume": [list(x) for x in self.top_volume],
        }


class MarketClient:
    def __init__(self, store: FixtureStore | None = None, base_url: str | None = None):
        self.store = store or FixtureStore()
        self.base_url = (base_url or os.environ.get("MARKET_API_BASE", "")).rstrip("/")

    def _get(self, path: str, params: dict):
        request = {"path": path, "params": params}
        return self.store.fetch("market", request, lambda: self._live_get(path, params))

    def _live_get(self, path: str, params: dict):
        if not self.base_url:
            raise UpstreamError("MARKET_API_BASE not configured and fixture mode is off")
        try:
            response = httpx.get(f"{self.base_url}{path}", params=params, timeout=30)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise UpstreamError(f"market API failure: {exc}") from exc
        return response.json()

    def all_tickers(self) -> list[dict]:
        return self._get("/ticker/24hr", {})

    def pair(self, symbol: str) -> str:
        s = symbol.upper()
        return s if s.endswith(QUOTE) else s + QUOTE


def token_market(
    client: MarketClient,
    symbol: str,
    interval: str = DEFAULT_INTERVAL,
    count: int = DEFAULT_CANDLES,
) -> MarketSnapshot:
    """Detail view: 24h ticker stats plus `count` candles."""
    if not symbol:
        raise ValueError("symbol must be non-empty")
    if not (1 <= count <= 1000):
        raise ValueError("candle count must be in [1, 1000]")
    pair = client.pair(symbol)
    tickers = {t["symbol"]: t for t in client.all_tickers()}
    ticker = tickers.get(pair)
    if ticker is None:
        raise TokenNotFoundError(f"no market data for {symbol!r}")
    raw = client._get("/klines", {"symbol": pair, "interval": interval, "limit": count})
    candles = tuple(
        Candle(
            open_time=int(k[0]),
            open=float(k[1]),
            high=float(k[2]),
            low=float(k[3]),
            close=float(k[4]),
            volume=float(k[5]),
        )
        for k in raw[:count]
    )
    return MarketSnapshot(
        symbol=symbol.upper(),
        price=float(ticker["lastPrice"]),
        change_24h=float(ticker["priceChangePercent"]),
        volume_24h=float(ticker["quoteVolume"]),
        candles=candles,
    )


def market_overview(client: MarketClient, k: int = 10) -> MarketOverview:
    """Ranked lists over all quote-currency pairs; lengths clamp to the
    universe size."""
    if not (1 <= k <= 50):
        raise ValueError("k must be in [1, 50]")
    rows = []
    for t in client.all_tickers():
        symbol = t["symbol"]
        if not symbol.endswith(QUOTE):
            continue
        base = symbol[: -len(QUOTE)]
        rows.append((base, float(t["priceChangePercent"]), float(t["quoteVolume"])))
    gainers = sorted(rows, key=lambda r: (-r[1], r[0]))[:k]
    losers = sorted(rows, key=lambda r: (r[1], r[0]))[:k]
    volume = sorted(rows, key=lambda r: (-r[2], r[0]))[:k]
    return MarketOverview(
        top_gainers=tuple((r[0], r[1]) for r in gainers),
        top_losers=tuple((r[0], r[1]) for r in losers),
        top_volume=tuple((r[0], r[2]) for r in volume),
    )


def spot_price(client: MarketClient, symbol: str) -> float:
    pair = client.pair(symbol)
    tickers = {t["symbol"]: t for t in client.all_tickers()}
    if pair not in tickers:
        raise TokenNotFoundError(f"no spot price for {symbol!r}")
    return float(tickers[pair]["lastPrice"])
