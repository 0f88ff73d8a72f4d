"""Service assembly from a JSON config document.

Schema (all keys optional):
{
  "llm": {
    "api_base": "...", "api_key": "...",
    "caller_model": "...", "reasoner_model": "...", "judge_model": "...",
    "caller": {<backend descriptor>}, "reasoner": {...}, "judge": {...}
  },
  "fixtures": {"mode": "off|record|replay", "root": "path"},
  "data_dir": "data",
  "analyzer_path": "slither"
}

Per-role backend descriptors override the shared http backend; with no llm
section at all, every role shares one http backend from LLM_API_BASE.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..errors import ConfigurationError
from ..gateway import Backend, RoleModels, make_backend
from ..registry import default_catalog, load_catalog
from ..tools import (
    AddressLabelDirectory,
    ExplorerClient,
    FixtureAnalyzer,
    FixtureStore,
    MarketClient,
    NewsClient,
    SearchClient,
    SubprocessAnalyzer,
    TokenDirectoryClient,
)
from .orchestrator import Orchestrator, ServiceClients
from .sessions import SessionStore


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    return json.loads(Path(path).read_text())


def _role_backend(llm: dict, role: str) -> Backend:
    descriptor = llm.get(role)
    if descriptor:
        return make_backend(descriptor)
    endpoint = llm.get("api_base") or os.environ.get("LLM_API_BASE", "")
    if not endpoint:
        raise ConfigurationError(
            f"no backend for role {role!r}: set llm.{role}, llm.api_base, or LLM_API_BASE"
        )
    return make_backend(
        {"kind": "http", "endpoint": endpoint, "api_key": llm.get("api_key")}
    )


def build_models(config: dict) -> RoleModels:
    llm = config.get("llm", {})
    return RoleModels(
        caller=llm.get("caller_model") or os.environ.get("CALLER_MODEL", "caller"),
        reasoner=llm.get("reasoner_model") or os.environ.get("REASONER_MODEL", "reasoner"),
        judge=llm.get("judge_model") or os.environ.get("JUDGE_MODEL", "judge"),
    )


def build_clients(config: dict) -> ServiceClients:
    llm = config.get("llm", {})
    fixtures = config.get("fixtures", {})
    store = FixtureStore(root=fixtures.get("root"), mode=fixtures.get("mode"))
    catalog_path = config.get("catalog")
    catalog = load_catalog(catalog_path) if catalog_path else default_catalog()
    analyzer_path = config.get("analyzer_path") or os.environ.get("ANALYZER_PATH", "")
    analyzer = SubprocessAnalyzer(analyzer_path) if store.mode == "off" else FixtureAnalyzer(store)
    return ServiceClients(
        caller=_role_backend(llm, "caller"),
        reasoner=_role_backend(llm, "reasoner"),
        catalog=catalog,
        market=MarketClient(store),
        directory=TokenDirectoryClient(store),
        explorer=ExplorerClient(store),
        labels=AddressLabelDirectory(config.get("address_labels")),
        analyzer=analyzer,
        news=NewsClient(store),
        search=SearchClient(store),
        models=build_models(config),
    )


def build_judge_backend(config: dict) -> Backend:
    return _role_backend(config.get("llm", {}), "judge")


def build_orchestrator(config: dict) -> Orchestrator:
    data_dir = config.get("data_dir")
    store = SessionStore(root=data_dir) if data_dir else SessionStore()
    return Orchestrator(build_clients(config), store)
