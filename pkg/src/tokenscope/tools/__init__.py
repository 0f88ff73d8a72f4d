"""Data-analytics tools: market data, on-chain transfers, contract security,
and the external-feed clients, all with live/fixture dual modes."""

from .feeds import NewsClient, SearchClient, parse_when
from .fixtures import FixtureStore, canonical_key, shipped_fixture_root
from .market import (
    Candle,
    MarketClient,
    MarketOverview,
    MarketSnapshot,
    market_overview,
    spot_price,
    token_market,
)
from .onchain import (
    AddressLabelDirectory,
    ExplorerClient,
    SourceBundle,
    TokenDirectoryClient,
    WhaleTransfer,
    classify_intent,
    fetch_verified_source,
    large_transfers,
    resolve_contract,
)
from .security import (
    Analyzer,
    FixtureAnalyzer,
    RawFinding,
    SecurityFinding,
    SecurityReport,
    SubprocessAnalyzer,
    bundle_digest,
    filter_findings,
    parse_analyzer_output,
    run_static_analysis,
    summarize_security,
)

__all__ = [
    "AddressLabelDirectory",
    "Analyzer",
    "Candle",
    "ExplorerClient",
    "FixtureAnalyzer",
    "FixtureStore",
    "MarketClient",
    "MarketOverview",
    "MarketSnapshot",
    "NewsClient",
    "RawFinding",
    "SearchClient",
    "SecurityFinding",
    "SecurityReport",
    "SourceBundle",
    "SubprocessAnalyzer",
    "TokenDirectoryClient",
    "WhaleTransfer",
    "bundle_digest",
    "canonical_key",
    "classify_intent",
    "fetch_verified_source",
    "filter_findings",
    "large_transfers",
    "market_overview",
    "parse_analyzer_output",
    "parse_when",
    "resolve_contract",
    "run_static_analysis",
    "shipped_fixture_root",
    "spot_price",
    "summarize_security",
    "token_market",
]
