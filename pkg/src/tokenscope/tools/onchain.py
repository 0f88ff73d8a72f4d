"""On-chain data: token-to-contract resolution, whale transfers, and verified
source retrieval.

The token directory is a CoinGecko-style name/symbol to contract-address map;
the explorer is an Etherscan-style API for token transfers and verified
source code. Address labels come from a local directory file (the public
explorers expose labels only through their web UI, not a stable API).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import httpx

from ..errors import SourceUnavailableError, TokenNotFoundError, UpstreamError
from .fixtures import FixtureStore
from .market import MarketClient, spot_price

DEFAULT_MIN_USD = 1_000_000.0

LABELS = ("exchange", "whale_wallet", "contract", "unknown")
INTENTS = ("exchange_deposit", "exchange_withdrawal", "wallet_to_wallet", "unknown")


@dataclass(frozen=True)
class WhaleTransfer:
    tx_hash: str
    timestamp: int  # epoch seconds
    token: str
    amount: float  # token units
    usd_value: float
    from_label: str
    to_label: str
    intent: str = "unknown"

    def to_dict(self) -> dict:
        return {
            "tx_hash": self.tx_hash,
            "timestamp": self.timestamp,
            "token": self.token,
            "amount": self.amount,
            "usd_value": self.usd_value,
            "from_label": self.from_label,
            "to_label": self.to_label,
            "intent": self.intent,
        }


@dataclass(frozen=True)
class SourceBundle:
    address: str
    contract_name: str
    files: dict = field(default_factory=dict)  # filename -> source text

    def __post_init__(self):
        if len(set(self.files)) != len(self.files):
            raise ValueError("bundle file names must be unique")


class TokenDirectoryClient:
    """Token name/symbol -> contract address, case-insensitive on names."""

    def __init__(self, store: FixtureStore | None = None, base_url: str | None = None):
        self.store = store or FixtureStore()
        self.base_url = (base_url or os.environ.get("TOKEN_DIRECTORY_BASE", "")).rstrip("/")

    def token_map(self) -> dict:
        request = {"op": "token_map"}
        return self.store.fetch("directory", request, self._live_map)

    def _live_map(self) -> dict:
        if not self.base_url:
            raise UpstreamError("TOKEN_DIRECTORY_BASE not configured and fixture mode is off")
        try:
            response = httpx.get(
                f"{self.base_url}/coins/list", params={"include_platform": "true"}, timeout=30
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise UpstreamError(f"token directory failure: {exc}") from exc
        mapping = {}
        for coin in response.json():
            address = (coin.get("platforms") or {}).get("ethereum")
            if address:
                mapping[coin["symbol"].lower()] = address
                mapping[coin["name"].lower()] = address
        return mapping


def resolve_contract(directory: TokenDirectoryClient, token_name: str) -> str:
    if not token_name:
        raise ValueError("token name must be non-empty")
    mapping = directory.token_map()
    address = mapping.get(token_name.lower())
    if not address:
        raise TokenNotFoundError(f"cannot resolve token {token_name!r} to a contract")
    return address.lower()


class AddressLabelDirectory:
    """Local address classification store."""

    def __init__(self, path: str | Path | None = None):
        if path is None:
            text = resources.files("tokenscope").joinpath("config/address_labels.json").read_text()
            self._labels = json.loads(text)
        else:
            self._labels = json.loads(Path(path).read_text())
        self._labels = {k.lower(): v for k, v in self._labels.items()}

    def label(self, address: str) -> str:
        entry = self._labels.get(address.lower())
        if entry is None:
            return "unknown"
        label = entry.get("label", "unknown") if isinstance(entry, dict) else str(entry)
        return label if label in LABELS else "unknown"


def classify_intent(from_label: str, to_label: str) -> str:
    """Deposit check first, then withdrawal, then wallet-to-wallet between
    known non-exchange parties."""
    if to_label == "exchange":
        return "exchange_deposit"
    if from_label == "exchange":
        return "exchange_withdrawal"
    if from_label in ("whale_wallet", "contract") and to_label in ("whale_wallet", "contract"):
        return "wallet_to_wallet"
    return "unknown"


class ExplorerClient:
    def __init__(
        self,
        store: FixtureStore | None = None,
        base_url: str | None = None,
        api_key: str | None = None,
    ):
        self.store = store or FixtureStore()
        self.base_url = (base_url or os.environ.get("EXPLORER_API_BASE", "")).rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get("EXPLORER_API_KEY", "")

    def _get(self, request: dict):
        return self.store.fetch("explorer", request, lambda: self._live_get(request))

    def _live_get(self, request: dict):
        if not self.base_url:
            raise UpstreamError("EXPLORER_API_BASE not configured and fixture mode is off")
        params = dict(request)
        params["apikey"] = self.api_key
        try:
            response = httpx.get(self.base_url, params=params, timeout=30)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise UpstreamError(f"explorer failure: {exc}") from exc
        return response.json()

    def token_transfers(self, address: str) -> list[dict]:
        doc = self._get({"module": "account", "action": "tokentx", "contractaddress": address})
        return doc.get("result", [])

    def source_code(self, address: str) -> dict:
        doc = self._get({"module": "contract", "action": "getsourcecode", "address": address})
        results = doc.get("result") or []
        if not results:
            raise UpstreamError("explorer returned no source entry")
        return results[0]


def large_transfers(
    explorer: ExplorerClient,
    address: str,
    token: str,
    market: MarketClient,
    labels: AddressLabelDirectory | None = None,
    min_usd: float = DEFAULT_MIN_USD,
    window_s: float | None = None,
    now: int | None = None,
) -> list[WhaleTransfer]:
    """Transfers of the token at `address` valued at or above min_usd, at the
    spot price fetched now, sorted descending by USD value. ``window_s``
    restricts to transfers at most that many seconds before ``now``."""
    if not address:
        raise ValueError("address must be non-empty")
    if min_usd <= 0:
        raise ValueError("min_usd must be positive")
    labels = labels or AddressLabelDirectory()
    price = spot_price(market, token)
    cutoff = None
    if window_s is not None:
        cutoff = (now if now is not None else int(time.time())) - window_s
    out = []
    for row in explorer.token_transfers(address):
        decimals = int(row.get("tokenDecimal", 18))
        amount = float(row["value"]) / (10**decimals)
        usd = amount * price
        if usd < min_usd:
            continue
        if cutoff is not None and int(row["timeStamp"]) < cutoff:
            continue
        from_label = labels.label(row["from"])
        to_label = labels.label(row["to"])
        out.append(
            WhaleTransfer(
                tx_hash=row["hash"],
                timestamp=int(row["timeStamp"]),
                token=token.upper(),
                amount=amount,
                usd_value=usd,
                from_label=from_label,
                to_label=to_label,
                intent=classify_intent(from_label, to_label),
            )
        )
    out.sort(key=lambda t: (-t.usd_value, t.tx_hash))
    return out


def fetch_verified_source(explorer: ExplorerClient, address: str) -> SourceBundle:
    """Reconstruct the verified source bundle, including multi-file uploads
    (the explorer wraps those in a doubly-braced JSON envelope)."""
    if not address:
        raise ValueError("address must be non-empty")
    entry = explorer.source_code(address)
    source = entry.get("SourceCode", "")
    name = entry.get("ContractName") or "Contract"
    if not source:
        raise SourceUnavailableError(f"contract {address} has no verified source")
    files: dict[str, str] = {}
    text = source.strip()
    if text.startswith("{{") and text.endswith("}}"):
        text = text[1:-1]
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            doc = None
        if isinstance(doc, dict):
            sources = doc.get("sources", doc)
            for fname, body in sources.items():
                content = body.get("content") if isinstance(body, dict) else body
                if isinstance(content, str):
                    files[fname] = content
    if not files:
        files[f"{name}.sol"] = source
    return SourceBundle(address=address.lower(), contract_name=name, files=files)
