"""Plan-quality evaluation: per-prompt precision/recall and macro F1.

For each prompt, the generated plan G (the episode's deduplicated call
history) is compared to the annotated gold plan T as sets under a match key
(tool name, or name plus normalized required arguments in strict mode).
Empty-set rules: T and G both empty scores 1.0/1.0; tools invoked when T is
empty scores 0.0/0.0. The aggregate F1 is computed from the dataset-averaged
precision and recall, not from per-prompt F1s.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .calls import ToolCall
from .episode import EnvConfig, EpisodeState, Trajectory, run_episode
from .errors import DatasetError
from .registry import ToolCatalog, lookup

MATCH_MODES = ("name", "strict")


@dataclass(frozen=True)
class EvalExample:
    id: str
    prompt: str
    gold: tuple[ToolCall, ...]
    category: str | None = None


@dataclass(frozen=True)
class PromptResult:
    id: str
    generated: tuple[ToolCall, ...]
    precision: float
    recall: float
    matched: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "generated": [{"name": c.tool, "arguments": c.args} for c in self.generated],
            "precision": self.precision,
            "recall": self.recall,
            "matched": list(self.matched),
        }


@dataclass(frozen=True)
class EvalReport:
    per_prompt: tuple[PromptResult, ...]
    mean_precision: float
    mean_recall: float
    f1: float
    mode: str = "name"
    failed: int = 0

    def to_dict(self) -> dict:
        return {
            "header": {
                "n": len(self.per_prompt),
                "failed": self.failed,
                "mode": self.mode,
                "mean_precision": self.mean_precision,
                "mean_recall": self.mean_recall,
                "f1": self.f1,
            },
            "per_prompt": [r.to_dict() for r in self.per_prompt],
        }


def match_key(call: ToolCall, mode: str, catalog: ToolCatalog | None = None):
    """Set-membership key for a call. name: tool name only. strict: name plus
    the normalized required arguments (schema-known when a catalog is given,
    else all arguments)."""
    if mode == "name":
        return call.tool
    if mode == "strict":
        spec = lookup(catalog, call.tool) if catalog is not None else None
        if spec is not None:
            required = {p.name for p in spec.required_params}
            args = {k: v for k, v in call.args.items() if k in required}
        else:
            args = call.args
        return ToolCall(call.tool, args).key()
    raise ValueError(f"unknown match mode {mode!r}")


def dedup_calls(
    calls, mode: str = "name", catalog: ToolCatalog | None = None
) -> list[ToolCall]:
    """First occurrence wins; idempotent."""
    seen = set()
    out = []
    for c in calls:
        k = match_key(c, mode, catalog)
        if k not in seen:
            seen.add(k)
            out.append(c)
    return out


def prompt_prf(
    generated, gold, mode: str = "name", catalog: ToolCatalog | None = None
) -> tuple[float, float]:
    """Per-prompt precision and recall with the empty-set special cases."""
    g_keys = {match_key(c, mode, catalog) for c in generated}
    t_keys = {match_key(c, mode, catalog) for c in gold}
    if not t_keys:
        return (1.0, 1.0) if not g_keys else (0.0, 0.0)
    if not g_keys:
        return (0.0, 0.0)
    hit = len(g_keys & t_keys)
    return hit / len(g_keys), hit / len(t_keys)


def aggregate(results, mode: str = "name", failed: int = 0) -> EvalReport:
    """Arithmetic mean of per-prompt P and R; F1 from the means."""
    results = list(results)
    if not results:
        raise ValueError("cannot aggregate zero results")
    mean_p = sum(r.precision for r in results) / len(results)
    mean_r = sum(r.recall for r in results) / len(results)
    f1 = f1_from_means(mean_p, mean_r)
    return EvalReport(
        per_prompt=tuple(results),
        mean_precision=mean_p,
        mean_recall=mean_r,
        f1=f1,
        mode=mode,
        failed=failed,
    )


def f1_from_means(mean_precision: float, mean_recall: float) -> float:
    if mean_precision + mean_recall <= 0:
        return 0.0
    return 2.0 * mean_precision * mean_recall / (mean_precision + mean_recall)


def load_dataset(source: str | Path, catalog: ToolCatalog) -> list[EvalExample]:
    """Load a JSONL dataset: one {id, prompt, category?, gold:[{name,
    arguments}]} object per line. Gold plans are schema-checked against the
    catalog; duplicate ids and duplicate gold calls are rejected."""
    path = Path(source)
    examples: list[EvalExample] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path.name}:{lineno}: invalid JSON: {exc}") from exc
        ex_id = str(doc.get("id", ""))
        prompt = doc.get("prompt", "")
        if not ex_id or not prompt:
            raise DatasetError(f"{path.name}:{lineno}: id and prompt are required")
        if ex_id in seen_ids:
            raise DatasetError(f"{path.name}:{lineno}: duplicate id {ex_id!r}")
        seen_ids.add(ex_id)
        gold = []
        keys = set()
        for call_doc in doc.get("gold", []):
            call = ToolCall(call_doc["name"], dict(call_doc.get("arguments", {})))
            spec = lookup(catalog, call.tool)
            if spec is None:
                raise DatasetError(
                    f"{path.name}:{lineno}: gold references unknown tool {call.tool!r}"
                )
            for p in spec.required_params:
                if p.name not in call.args:
                    raise DatasetError(
                        f"{path.name}:{lineno}: gold call {call.tool!r} missing required "
                        f"param {p.name!r}"
                    )
            if call.key() in keys:
                raise DatasetError(f"{path.name}:{lineno}: duplicate gold call {call.tool!r}")
            keys.add(call.key())
            gold.append(call)
        examples.append(
            EvalExample(id=ex_id, prompt=prompt, gold=tuple(gold), category=doc.get("category"))
        )
    if not examples:
        raise DatasetError(f"{path.name}: empty dataset")
    return examples


def desk_dataset_path() -> Path:
    from importlib import resources

    return Path(str(resources.files("tokenscope").joinpath("data/desk60.jsonl")))


def run_eval(
    caller: Callable[[EpisodeState], str],
    dataset: list[EvalExample],
    catalog: ToolCatalog,
    env_config: EnvConfig | None = None,
    mode: str = "name",
) -> tuple[EvalReport, dict[str, Trajectory]]:
    """One greedy episode per prompt against simulated tools; G is the
    deduplicated call history. Prompts whose episode raises are excluded from
    the averages and surfaced in the report's failed count."""
    if mode not in MATCH_MODES:
        raise ValueError(f"unknown match mode {mode!r}")
    env_config = env_config or EnvConfig()
    results: list[PromptResult] = []
    transcripts: dict[str, Trajectory] = {}
    failed = 0
    for example in dataset:
        try:
            traj = run_episode(caller, example.prompt, catalog, env_config)
        except Exception:  # backend/transport failures: exclude, count, continue
            failed += 1
            continue
        transcripts[example.id] = traj
        generated = dedup_calls(traj.history, mode, catalog)
        precision, recall = prompt_prf(generated, example.gold, mode, catalog)
        gold_keys = {match_key(c, mode, catalog) for c in example.gold}
        matched = tuple(
            str(match_key(c, mode, catalog))
            for c in generated
            if match_key(c, mode, catalog) in gold_keys
        )
        results.append(
            PromptResult(
                id=example.id,
                generated=tuple(generated),
                precision=precision,
                recall=recall,
                matched=matched,
            )
        )
    report = aggregate(results, mode=mode, failed=failed)
    return report, transcripts
