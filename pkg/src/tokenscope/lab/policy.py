"""Softmax-linear policy and linear critic over the hand-built features.

The policy maps features to logits over (one action per catalog tool + stop);
choosing tool i emits a canonical one-call action with its required arguments
filled by per-kind defaults, and stop emits the literal stop token. Parameters
are plain numpy arrays so gradients stay closed-form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..calls import STOP_TOKEN, ToolCall, serialize_calls
from ..registry import ToolCatalog, ToolSpec
from .features import FEATURE_SCHEMA_VERSION, feature_names

_KIND_DEFAULTS = {"string": "BTC", "integer": 1, "number": 1.0, "boolean": False}


def canonical_call(spec: ToolSpec) -> ToolCall:
    """One-call action with required args filled by kind defaults (enum takes
    its first value)."""
    args = {}
    for p in spec.required_params:
        if p.kind == "enum":
            args[p.name] = p.enum_values[0]
        else:
            args[p.name] = _KIND_DEFAULTS[p.kind]
    return ToolCall(spec.name, args)


def action_order(catalog: ToolCatalog) -> list[str]:
    """Policy action slots: stop first, then tools in catalog order. Stop
    leads so that nucleus truncation at a uniform (fresh) policy never
    starves the terminate action of exploration."""
    return [STOP_TOKEN] + list(catalog.names)


def action_slot(kind: str, first_tool: str | None, catalog: ToolCatalog) -> int:
    """Map a parsed action back to its policy slot (stop and unparsable both
    map to the stop slot)."""
    if kind in ("stop", "fatal_unparsable"):
        return 0
    if first_tool in catalog.names:
        return 1 + catalog.names.index(first_tool)
    raise ValueError(f"cannot map action to a policy slot: {kind}/{first_tool}")


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max()
    e = np.exp(shifted)
    return e / e.sum()


@dataclass
class ToyPolicy:
    weights: np.ndarray  # (n_actions, n_features)
    action_names: list[str]  # catalog tool names + STOP_TOKEN
    action_texts: list[str]  # canonical wire text per action
    feature_names: list[str]
    catalog_version: str = "0"

    @classmethod
    def zeros(cls, catalog: ToolCatalog) -> "ToyPolicy":
        names = feature_names(catalog)
        actions = action_order(catalog)
        texts = [STOP_TOKEN] + [serialize_calls([canonical_call(t)]) for t in catalog.tools]
        return cls(
            weights=np.zeros((len(actions), len(names)), dtype=np.float64),
            action_names=actions,
            action_texts=texts,
            feature_names=names,
            catalog_version=catalog.version,
        )

    @property
    def stop_index(self) -> int:
        return 0

    def copy(self) -> "ToyPolicy":
        return ToyPolicy(
            weights=self.weights.copy(),
            action_names=list(self.action_names),
            action_texts=list(self.action_texts),
            feature_names=list(self.feature_names),
            catalog_version=self.catalog_version,
        )

    def logits(self, features: np.ndarray) -> np.ndarray:
        return self.weights @ features

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        return _softmax(self.logits(features))

    def action_index(self, action_kind: str, first_tool: str | None) -> int:
        """Map a parsed action back to the policy's action slot."""
        if action_kind in ("stop", "fatal_unparsable"):
            return self.stop_index
        if first_tool is not None and first_tool in self.action_names:
            return self.action_names.index(first_tool)
        raise ValueError(f"action not representable by this policy: {action_kind}/{first_tool}")

    def save(self, path: str | Path) -> None:
        doc = {
            "feature_schema": FEATURE_SCHEMA_VERSION,
            "catalog_version": self.catalog_version,
            "feature_names": self.feature_names,
            "action_names": self.action_names,
            "action_texts": self.action_texts,
            "weights": self.weights.tolist(),
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ToyPolicy":
        doc = json.loads(Path(path).read_text())
        if doc.get("feature_schema") != FEATURE_SCHEMA_VERSION:
            raise ValueError(
                f"policy file has feature schema {doc.get('feature_schema')!r}, "
                f"expected {FEATURE_SCHEMA_VERSION!r}"
            )
        return cls(
            weights=np.asarray(doc["weights"], dtype=np.float64),
            action_names=list(doc["action_names"]),
            action_texts=list(doc["action_texts"]),
            feature_names=list(doc["feature_names"]),
            catalog_version=str(doc.get("catalog_version", "0")),
        )


@dataclass
class ValueEstimator:
    weights: np.ndarray  # (n_features,)

    @classmethod
    def zeros(cls, n_features: int) -> "ValueEstimator":
        return cls(weights=np.zeros(n_features, dtype=np.float64))

    def value(self, features: np.ndarray) -> float:
        return float(self.weights @ features)

    def copy(self) -> "ValueEstimator":
        return ValueEstimator(weights=self.weights.copy())


def sample_index(p: np.ndarray, top_p: float, rng: np.random.Generator) -> int:
    """Nucleus sampling: smallest probability-sorted prefix reaching top_p,
    renormalized. Ties sort by index so the cut is deterministic."""
    order = np.argsort(-p, kind="stable")
    cum = np.cumsum(p[order])
    k = int(np.searchsorted(cum, top_p)) + 1
    k = min(k, len(p))
    kept = order[:k]
    kept_p = p[kept]
    kept_p = kept_p / kept_p.sum()
    u = rng.random()
    j = int(np.searchsorted(np.cumsum(kept_p), u, side="right"))
    return int(kept[min(j, k - 1)])


def act(
    policy: ToyPolicy,
    features: np.ndarray,
    mode: str = "greedy",
    rng: np.random.Generator | None = None,
    temperature: float = 0.7,
    top_p: float = 0.8,
) -> str:
    """Select one action and emit its wire text. Greedy takes the argmax
    (ties break to the lowest index); sample applies temperature then
    nucleus truncation."""
    z = policy.logits(features)
    if mode == "greedy":
        idx = int(np.argmax(z))
    elif mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        p = _softmax(z / temperature)
        idx = sample_index(p, top_p, rng)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return policy.action_texts[idx]
