import json
import random

import pytest

from tokenscope.errors import (
    AnalyzerUnavailableError,
    FixtureMissError,
    SourceUnavailableError,
    TokenNotFoundError,
)
from tokenscope.gateway import ScriptedBackend
from tokenscope.tools import (
    AddressLabelDirectory,
    Candle,
    ExplorerClient,
    FixtureAnalyzer,
    FixtureStore,
    MarketClient,
    SecurityFinding,
    SourceBundle,
    SubprocessAnalyzer,
    TokenDirectoryClient,
    classify_intent,
    fetch_verified_source,
    filter_findings,
    large_transfers,
    market_overview,
    parse_analyzer_output,
    resolve_contract,
    run_static_analysis,
    summarize_security,
    token_market,
)
from tokenscope.tools.security import RawFinding

USDC = "0xa0b86991c6218b36c1d19d4a2e9eb0ce3606eb48"
VAULT = "0xab5801a7d398351b8be11c439e05c5b3259aec9b"
GREETER = "0xcafe00000000000000000000000000000000c0de"
DAI = "0x6b175474e89094c44da98b954eedeac495271d0f"
UNVERIFIED = "0x000000000000000000000000000000000000dead"


@pytest.fixture(scope="module")
def store():
    return FixtureStore(mode="replay")


@pytest.fixture(scope="module")
def market(store):
    return MarketClient(store)


@pytest.fixture(scope="module")
def explorer(store):
    return ExplorerClient(store)


@pytest.fixture(scope="module")
def directory(store):
    return TokenDirectoryClient(store)


# ---------------------------------------------------------------------------
# market
# ---------------------------------------------------------------------------


def test_token_market_btc_fixture(market):
    snap = token_market(market, "BTC", "1d", 30)
    assert len(snap.candles) == 30
    assert snap.price > 0
    assert snap.volume_24h > 0


def test_token_market_count_validated(market):
    with pytest.raises(ValueError):
        token_market(market, "BTC", "1d", 0)


def test_token_market_unknown_symbol(market):
    with pytest.raises(TokenNotFoundError):
        token_market(market, "NOPE")


def test_token_market_fixture_determinism(market):
    a = token_market(market, "BTC").to_dict()
    b = token_market(market, "BTC").to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_ohlc_invariant_on_shipped_fixtures(market):
    for symbol in ("BTC", "ETH"):
        snap = token_market(market, symbol)
        for c in snap.candles:
            assert c.high >= max(c.open, c.close) >= min(c.open, c.close) >= c.low
        times = [c.open_time for c in snap.candles]
        assert times == sorted(times)


def test_candle_constructor_rejects_bad_ordering():
    with pytest.raises(ValueError):
        Candle(open_time=0, open=10.0, high=9.0, low=8.0, close=9.5, volume=1.0)


def test_market_overview_orders_verified_by_independent_sort(market):
    overview = market_overview(market, 10)
    assert len(overview.top_gainers) == 10
    changes = [v for _s, v in overview.top_gainers]
    assert changes == sorted(changes, reverse=True)
    losses = [v for _s, v in overview.top_losers]
    assert losses == sorted(losses)
    volumes = [v for _s, v in overview.top_volume]
    assert volumes == sorted(volumes, reverse=True)
    # cross-check the gainers list against a from-scratch sort of raw tickers
    raw = market.all_tickers()
    rows = sorted(
        ((t["symbol"][:-4], float(t["priceChangePercent"])) for t in raw if t["symbol"].endswith("USDT")),
        key=lambda r: (-r[1], r[0]),
    )
    assert list(overview.top_gainers) == rows[:10]


def test_market_overview_k_clamped_to_universe(market):
    overview = market_overview(market, 50)
    assert len(overview.top_volume) <= 100


def test_market_overview_k_validated(market):
    with pytest.raises(ValueError):
        market_overview(market, 0)


def test_fixture_miss_is_distinct_error(store):
    client = MarketClient(FixtureStore(mode="replay"))
    with pytest.raises(FixtureMissError):
        client._get("/klines", {"symbol": "SOLUSDT", "interval": "1h", "limit": 7})


# ---------------------------------------------------------------------------
# directory / transfers / intent
# ---------------------------------------------------------------------------


def test_resolve_contract_known(directory):
    assert resolve_contract(directory, "USDC") == USDC


def test_resolve_contract_case_insensitive(directory):
    assert resolve_contract(directory, "uSdC") == USDC


def test_resolve_contract_unknown(directory):
    with pytest.raises(TokenNotFoundError):
        resolve_contract(directory, "teleportium")


def test_large_transfers_threshold(explorer, market):
    transfers = large_transfers(explorer, USDC, "USDC", market)
    assert len(transfers) == 2  # 2.5M and 1.2M pass; 0.9M filtered
    assert all(t.usd_value >= 1_000_000 for t in transfers)


def test_large_transfers_higher_threshold_empties(explorer, market):
    assert large_transfers(explorer, USDC, "USDC", market, min_usd=3_000_000) == []


def test_large_transfers_sorted_descending(explorer, market):
    transfers = large_transfers(explorer, USDC, "USDC", market)
    values = [t.usd_value for t in transfers]
    assert values == sorted(values, reverse=True)


def test_large_transfers_time_window(explorer, market):
    # fixture timestamps: 1754000000, 1754003600 (filtered by value), 1754007200
    now = 1754010000
    recent = large_transfers(explorer, USDC, "USDC", market, window_s=5000, now=now)
    assert [t.timestamp for t in recent] == [1754007200]
    everything = large_transfers(explorer, USDC, "USDC", market, window_s=100000, now=now)
    assert len(everything) == 2


def test_large_transfers_threshold_property(explorer, market):
    """Randomized thresholds: soundness of the filter on the fixture."""
    rng = random.Random(321)
    baseline = large_transfers(explorer, USDC, "USDC", market, min_usd=1.0)
    for _ in range(200):
        threshold = rng.uniform(1.0, 5_000_000.0)
        got = large_transfers(explorer, USDC, "USDC", market, min_usd=threshold)
        assert all(t.usd_value >= threshold for t in got)
        expected = sorted(
            [t for t in baseline if t.usd_value >= threshold],
            key=lambda t: (-t.usd_value, t.tx_hash),
        )
        assert [t.tx_hash for t in got] == [t.tx_hash for t in expected]


def test_transfer_intents_from_fixture(explorer, market):
    transfers = large_transfers(explorer, USDC, "USDC", market)
    # fixture: 2.5M whale->exchange, 1.2M whale->whale (0.9M filtered)
    assert [t.intent for t in transfers] == ["exchange_deposit", "wallet_to_wallet"]
    assert transfers[0].from_label == "whale_wallet"
    assert transfers[0].to_label == "exchange"


@pytest.mark.parametrize(
    "frm,to,expected",
    [
        ("whale_wallet", "exchange", "exchange_deposit"),
        ("exchange", "unknown", "exchange_withdrawal"),
        ("exchange", "exchange", "exchange_deposit"),  # deposit check first
        ("whale_wallet", "contract", "wallet_to_wallet"),
        ("unknown", "unknown", "unknown"),
        ("unknown", "whale_wallet", "unknown"),
    ],
)
def test_classify_intent_rules(frm, to, expected):
    assert classify_intent(frm, to) == expected


def test_label_directory_unknown_default():
    labels = AddressLabelDirectory()
    assert labels.label("0x1234567890123456789012345678901234567890") == "unknown"
    assert labels.label("0x28C6c06298d514Db089934071355E5743bf21d60") == "exchange"


# ---------------------------------------------------------------------------
# verified source + static analysis
# ---------------------------------------------------------------------------


def test_fetch_verified_source_single_file(explorer):
    bundle = fetch_verified_source(explorer, VAULT)
    assert bundle.contract_name == "TokenVault"
    assert list(bundle.files) == ["TokenVault.sol"]
    assert "withdraw" in bundle.files["TokenVault.sol"]


def test_fetch_verified_source_multi_file(explorer):
    bundle = fetch_verified_source(explorer, DAI)
    assert set(bundle.files) == {"contracts/StableToken.sol", "contracts/Arithmetic.sol"}
    assert bundle.contract_name == "StableToken"


def test_fetch_unverified_raises(explorer):
    with pytest.raises(SourceUnavailableError):
        fetch_verified_source(explorer, UNVERIFIED)


def test_static_analysis_reentrancy_fixture(explorer, store):
    bundle = fetch_verified_source(explorer, VAULT)
    raw = run_static_analysis(FixtureAnalyzer(store), bundle)
    high = [f for f in raw if f.severity == "high"]
    assert any("reentrancy" in f.kind for f in high)


def test_static_analysis_trivial_contract_clean(explorer, store):
    bundle = fetch_verified_source(explorer, GREETER)
    raw = run_static_analysis(FixtureAnalyzer(store), bundle)
    assert [f for f in raw if f.severity in ("high", "medium")] == []


def test_subprocess_analyzer_missing_executable(monkeypatch):
    monkeypatch.delenv("ANALYZER_PATH", raising=False)
    bundle = SourceBundle(address="0xdead", contract_name="X", files={"X.sol": "contract X {}"})
    with pytest.raises(AnalyzerUnavailableError):
        SubprocessAnalyzer().run(bundle)


def raw(kind, severity, line=12):
    return RawFinding(kind=kind, severity=severity, contract="TokenVault", line=line, description=kind)


def test_filter_keeps_only_high_medium():
    findings = [raw("a", "high"), raw("b", "low"), raw("c", "informational")]
    kept = filter_findings(findings)
    assert [f.severity for f in kept] == ["high"]
    assert filter_findings([]) == []


def test_filter_severity_property():
    rng = random.Random(99)
    severities = ["high", "medium", "low", "informational"]
    for _ in range(300):
        findings = [raw(f"k{i}", rng.choice(severities)) for i in range(rng.randint(0, 10))]
        kept = filter_findings(findings)
        assert all(f.severity in ("high", "medium") for f in kept)
        assert len(kept) == sum(1 for f in findings if f.severity in ("high", "medium"))


def test_filter_attaches_snippets(explorer, store):
    bundle = fetch_verified_source(explorer, VAULT)
    rawf = run_static_analysis(FixtureAnalyzer(store), bundle)
    kept = filter_findings(rawf, bundle)
    assert len(kept) == 1
    # +-3 lines around line 11 of TokenVault.sol, checked against the source
    lines = bundle.files["TokenVault.sol"].splitlines()
    assert kept[0].snippet == "\n".join(lines[7:14])


def test_security_finding_rejects_low():
    with pytest.raises(ValueError):
        SecurityFinding(kind="x", severity="low", contract="C", line=1, description="d")


def test_parse_analyzer_output_unknown_severity_downgrades():
    doc = {"results": {"detectors": [{"check": "x", "impact": "Critical", "description": "d", "elements": []}]}}
    assert parse_analyzer_output(doc)[0].severity == "informational"


# ---------------------------------------------------------------------------
# summarize_security
# ---------------------------------------------------------------------------


def two_findings():
    return [
        SecurityFinding(kind="reentrancy-eth", severity="high", contract="V", line=12, description="r"),
        SecurityFinding(kind="unprotected-mint", severity="medium", contract="V", line=20, description="m"),
    ]


def test_summarize_false_positive_screening():
    backend = ScriptedBackend(
        [json.dumps({"false_positive_indices": [0], "summary": "Only the mint issue is real."})]
    )
    report = summarize_security(two_findings(), backend, address="0xdead")
    assert report.findings[0].false_positive
    assert not report.findings[1].false_positive
    assert report.overall_risk == "medium"  # high finding was screened out
    assert not report.degraded


def test_summarize_zero_findings_low_risk():
    report = summarize_security([], ScriptedBackend([]), address="0xdead")
    assert report.overall_risk == "low"
    assert "No high or medium" in report.summary


def test_summarize_unparsable_degrades():
    backend = ScriptedBackend(["nonsense", "more nonsense"])
    report = summarize_security(two_findings(), backend, address="0xdead")
    assert report.degraded
    assert all(not f.false_positive for f in report.findings)
    assert report.overall_risk == "high"
    assert report.summary


def test_summarize_retry_then_parse():
    backend = ScriptedBackend(
        ["garbled", json.dumps({"false_positive_indices": [], "summary": "Both stand."})]
    )
    report = summarize_security(two_findings(), backend)
    assert not report.degraded
    assert report.overall_risk == "high"
