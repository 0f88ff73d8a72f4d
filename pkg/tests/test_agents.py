import json
from datetime import datetime, timezone

import pytest

from tokenscope.agents import (
    cn_analyze,
    cn_fetch,
    he_analyze,
    he_fetch,
    pb_critique,
    pb_gather,
    pb_report,
    pb_synthesize,
    parse_json_payload,
)
from tokenscope.agents.project import BASE_SECTIONS, INSUFFICIENT
from tokenscope.gateway import ScriptedBackend
from tokenscope.tools import FixtureStore, NewsClient, SearchClient

NOW = datetime(2026, 8, 8, tzinfo=timezone.utc)


@pytest.fixture(scope="module")
def store():
    return FixtureStore(mode="replay")


@pytest.fixture(scope="module")
def news(store):
    return NewsClient(store)


@pytest.fixture(scope="module")
def search(store):
    return SearchClient(store)


def sections(**overrides):
    base = {
        "overview": "A programmable blockchain.",
        "team": "Distributed research collective.",
        "tokenomics": "Near-flat supply with fee burn.",
        "technology": "Proof of stake with rollups.",
    }
    base.update(overrides)
    return base


# ---------------------------------------------------------------------------
# PBAgent
# ---------------------------------------------------------------------------


def test_pb_gather_dedups_urls(search):
    docs = pb_gather(search, "Ethereum")
    urls = [d["url"] for d in docs]
    assert len(urls) == len(set(urls))
    assert len(docs) >= 3


def test_pb_gather_unknown_project_empty(search):
    assert pb_gather(search, "Unknownium") == []


def test_pb_gather_cap(search):
    assert len(pb_gather(search, "Ethereum", max_documents=2)) == 2


def test_pb_synthesize_scripted(search):
    backend = ScriptedBackend([json.dumps(sections())])
    docs = pb_gather(search, "Ethereum")
    base, degraded = pb_synthesize("Ethereum", docs, backend)
    assert set(base) == set(BASE_SECTIONS)
    assert base["overview"] == "A programmable blockchain."
    assert not degraded


def test_pb_synthesize_empty_documents_skips_backend():
    backend = ScriptedBackend([])  # would raise if called
    base, degraded = pb_synthesize("Ghost", [], backend)
    assert all(v == INSUFFICIENT for v in base.values())
    assert not degraded


def test_pb_synthesize_malformed_retry_then_degraded(search):
    backend = ScriptedBackend(["not json", "still not json"])
    docs = pb_gather(search, "Ethereum")
    base, degraded = pb_synthesize("Ethereum", docs, backend)
    assert degraded
    assert all(v == INSUFFICIENT for v in base.values())


def test_pb_critique_scripted():
    verdicts = {
        "utility": "Real usage.",
        "distribution": "Fair enough.",
        "innovation": "Meaningful.",
        "competitors": "Faces several rivals.",
    }
    backend = ScriptedBackend([json.dumps(verdicts)])
    critique, degraded = pb_critique("Ethereum", sections(), backend)
    assert critique == verdicts
    assert not degraded


def test_pb_critique_insufficient_base_states_impossible():
    backend = ScriptedBackend([])  # must not be called
    base = {k: INSUFFICIENT for k in BASE_SECTIONS}
    critique, degraded = pb_critique("Ghost", base, backend)
    assert all("not possible" in v for v in critique.values())
    assert not degraded


def test_pb_report_end_to_end(search):
    backend = ScriptedBackend(
        [
            json.dumps(sections()),
            json.dumps(
                {"utility": "u", "distribution": "d", "innovation": "i", "competitors": "c"}
            ),
        ]
    )
    report = pb_report("Ethereum", search, backend)
    assert report.sources
    assert report.critique["competitors"] == "c"
    assert not report.degraded


# ---------------------------------------------------------------------------
# HEAgent
# ---------------------------------------------------------------------------


def test_he_fetch_window_filters(news):
    # 3 of the 5 BTC events fall within 200 days of 2026-08-08
    events = he_fetch(news, "BTC", window_days=200, now=NOW)
    assert len(events) == 3
    dates = [e["date"] for e in events]
    assert dates == sorted(dates)


def test_he_fetch_window_validated(news):
    with pytest.raises(ValueError):
        he_fetch(news, "BTC", window_days=0)


def test_he_fetch_ascending_against_oracle(news):
    events = he_fetch(news, "BTC", window_days=2000, now=NOW)
    assert [e["date"] for e in events] == sorted(e["date"] for e in events)


def test_he_analyze_count_preserved(news):
    events = he_fetch(news, "BTC", window_days=2000, now=NOW)
    notes = [{"price_impact": "p", "manipulation_risk": "m", "crisis_response": "c"}] * len(events)
    backend = ScriptedBackend([json.dumps(notes)])
    records, degraded = he_analyze(events, backend, "BTC")
    assert len(records) == len(events)
    assert not degraded
    assert all(r.price_impact == "p" for r in records)


def test_he_analyze_empty_events_contract_error():
    with pytest.raises(ValueError):
        he_analyze([], ScriptedBackend([]))


def test_he_analyze_wrong_count_degrades(news):
    events = he_fetch(news, "BTC", window_days=2000, now=NOW)
    backend = ScriptedBackend([json.dumps([{"price_impact": "p"}]), json.dumps([{"price_impact": "p"}])])
    records, degraded = he_analyze(events, backend, "BTC")
    assert degraded
    assert len(records) == len(events)  # never drops or invents items


# ---------------------------------------------------------------------------
# CNAgent
# ---------------------------------------------------------------------------


def test_cn_fetch_limit_and_order(news):
    items = cn_fetch(news, "ETF", limit=5)
    assert len(items) == 5
    stamps = [i["published_at"] for i in items]
    assert stamps == sorted(stamps, reverse=True)


def test_cn_fetch_limit_validated(news):
    with pytest.raises(ValueError):
        cn_fetch(news, "ETF", limit=0)


def test_cn_fetch_global_feed_default(news):
    assert len(cn_fetch(news, None, limit=10)) == 5


def annotation(sent="bullish"):
    return {"sentiment": sent, "affected_assets": ["BTC"], "magnitude": "medium"}


def test_cn_analyze_annotates_one_to_one(news):
    items = cn_fetch(news, "bitcoin", limit=10)
    backend = ScriptedBackend(
        [json.dumps({"annotations": [annotation()] * len(items), "synthesis": "BTC-led upside."})]
    )
    digest = cn_analyze(items, backend)
    assert len(digest.items) == len(items)
    assert digest.items[0].sentiment == "bullish"
    assert not digest.degraded
    # synthesis mentions an asset present in the annotations
    assert "BTC" in digest.synthesis


def test_cn_analyze_empty_rejected():
    with pytest.raises(ValueError):
        cn_analyze([], ScriptedBackend([]))


def test_cn_analyze_bad_payload_degrades(news):
    items = cn_fetch(news, "bitcoin", limit=10)
    backend = ScriptedBackend(["junk", "junk"])
    digest = cn_analyze(items, backend)
    assert digest.degraded
    assert len(digest.items) == len(items)
    assert all(i.sentiment == "neutral" for i in digest.items)


# ---------------------------------------------------------------------------
# shared parsing
# ---------------------------------------------------------------------------


def test_parse_json_payload_tolerates_fences():
    assert parse_json_payload('ok\n```json\n{"a": 1}\n```') == {"a": 1}
    assert parse_json_payload("x [1, 2] y") == [1, 2]
    assert parse_json_payload("nothing here") is None
