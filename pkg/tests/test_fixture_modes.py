import json

import pytest

from tokenscope.errors import ConfigurationError, FixtureMissError
from tokenscope.service.config import build_clients
from tokenscope.tools import FixtureStore, MarketClient, canonical_key, market_overview


def ticker(symbol, change, volume):
    return {
        "symbol": symbol,
        "lastPrice": "1.0",
        "priceChangePercent": str(change),
        "quoteVolume": str(volume),
    }


def test_record_then_replay_round_trip(tmp_path, monkeypatch):
    rows = [ticker("AAAUSDT", 5.0, 100), ticker("BBBUSDT", -2.0, 300), ticker("CCCUSDT", 1.0, 200)]
    recorder = MarketClient(FixtureStore(root=tmp_path, mode="record"))
    monkeypatch.setattr(recorder, "_live_get", lambda path, params: rows)
    assert recorder.all_tickers() == rows
    # a fresh replay-mode client reads the recorded file; no live path needed
    replayer = MarketClient(FixtureStore(root=tmp_path, mode="replay"))
    assert replayer.all_tickers() == rows


def test_overview_clamps_to_small_universe(tmp_path):
    rows = [ticker("AAAUSDT", 5.0, 100), ticker("BBBUSDT", -2.0, 300), ticker("CCCUSDT", 1.0, 200)]
    store = FixtureStore(root=tmp_path, mode="record")
    store.save("market", {"path": "/ticker/24hr", "params": {}}, rows)
    overview = market_overview(MarketClient(FixtureStore(root=tmp_path, mode="replay")), 10)
    assert len(overview.top_gainers) == 3
    assert overview.top_gainers[0][0] == "AAA"
    assert overview.top_losers[0][0] == "BBB"
    assert overview.top_volume[0][0] == "BBB"


def test_canonical_key_is_order_insensitive():
    a = canonical_key("svc", {"x": 1, "y": 2})
    b = canonical_key("svc", {"y": 2, "x": 1})
    assert a == b
    assert canonical_key("svc", {"x": 1}) != canonical_key("other", {"x": 1})


def test_off_mode_requires_live_configuration(tmp_path, monkeypatch):
    monkeypatch.delenv("MARKET_API_BASE", raising=False)
    client = MarketClient(FixtureStore(root=tmp_path, mode="off"))
    with pytest.raises(Exception, match="MARKET_API_BASE"):
        client.all_tickers()


def test_unknown_fixture_mode_rejected(tmp_path):
    with pytest.raises(ValueError):
        FixtureStore(root=tmp_path, mode="sometimes")


def test_fixture_files_are_auditable(tmp_path):
    store = FixtureStore(root=tmp_path, mode="record")
    store.save("svc", {"q": 1}, {"answer": 2})
    files = list(tmp_path.rglob("*.json"))
    assert len(files) == 1
    doc = json.loads(files[0].read_text())
    assert doc["request"] == {"q": 1}
    assert doc["response"] == {"answer": 2}


def test_build_clients_requires_some_backend(monkeypatch):
    monkeypatch.delenv("LLM_API_BASE", raising=False)
    with pytest.raises(ConfigurationError, match="caller"):
        build_clients({"fixtures": {"mode": "replay"}})


def test_build_clients_env_fallback(monkeypatch):
    monkeypatch.setenv("LLM_API_BASE", "http://llm.internal/v1")
    monkeypatch.setenv("CALLER_MODEL", "my-caller")
    clients = build_clients({"fixtures": {"mode": "replay"}})
    assert clients.models.caller == "my-caller"


def test_replay_miss_raises(tmp_path):
    store = FixtureStore(root=tmp_path, mode="replay")
    with pytest.raises(FixtureMissError):
        store.load("svc", {"never": "recorded"})
