"""Recorded-response store for external services.

Every external client (exchange, explorer, token directory, news, search,
analyzer) funnels its requests through a FixtureStore in one of three modes:

  off    — always hit the live service
  record — hit the live service and save the response
  replay — serve only recorded responses; a miss raises FixtureMissError

Responses are keyed by a content address of the canonicalized request
(service + sorted-JSON request descriptor), so replay is exact and
bit-reproducible. Files are stored one per request as
{service}/{sha16}.json with the request embedded for auditability.
"""

from __future__ import annotations

import hashlib
import json
import os
from importlib import resources
from pathlib import Path

from ..errors import FixtureMissError

MODES = ("off", "record", "replay")


def canonical_key(service: str, request: dict) -> str:
    blob = json.dumps({"service": service, "request": request}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def shipped_fixture_root() -> Path:
    return Path(str(resources.files("tokenscope").joinpath("fixtures")))


class FixtureStore:
    def __init__(self, root: str | Path | None = None, mode: str | None = None):
        self.root = Path(root) if root else shipped_fixture_root()
        self.mode = mode if mode is not None else os.environ.get("FIXTURE_MODE", "replay")
        if self.mode not in MODES:
            raise ValueError(f"unknown fixture mode {self.mode!r}")

    def _path(self, service: str, request: dict) -> Path:
        return self.root / service / f"{canonical_key(service, request)}.json"

    def load(self, service: str, request: dict):
        path = self._path(service, request)
        if not path.exists():
            raise FixtureMissError(
                f"no recorded {service} response for request {json.dumps(request, sort_keys=True)}"
            )
        return json.loads(path.read_text())["response"]

    def save(self, service: str, request: dict, response) -> None:
        path = self._path(service, request)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps({"service": service, "request": request, "response": response}, indent=2)
            + "\n"
        )

    def fetch(self, service: str, request: dict, live_call):
        """Route one request through the configured mode."""
        if self.mode == "replay":
            return self.load(service, request)
        response = live_call()
        if self.mode == "record":
            self.save(service, request, response)
        return response
