"""Report rendering: delimited outputs plus matplotlib figures next to them.

Both CLI report paths (train-toy learning curves, eval reports) write a CSV
and render a PNG sibling so a run leaves both machine-readable and glanceable
artifacts.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CURVE_FIELDS = (
    "batch",
    "episodes",
    "mean_reward",
    "mean_coverage",
    "mean_relevance",
    "mean_plan_size",
    "beta",
    "kl",
    "objective",
    "critic_loss",
)


def write_curve_csv(records, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CURVE_FIELDS)
        writer.writeheader()
        for record in records:
            writer.writerow({k: record.to_dict()[k] for k in CURVE_FIELDS})
    return path


def render_curve_figure(records, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    batches = [r.batch for r in records]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    axes[0, 0].plot(batches, [r.mean_reward for r in records], marker="o", ms=3)
    axes[0, 0].set_title("mean reward")
    axes[0, 1].plot(batches, [r.mean_coverage for r in records], marker="o", ms=3, color="tab:green")
    axes[0, 1].set_title("mean coverage score")
    axes[1, 0].plot(batches, [r.mean_plan_size for r in records], marker="o", ms=3, color="tab:orange")
    axes[1, 0].set_title("mean plan size (distinct tools)")
    axes[1, 0].set_xlabel("batch")
    axes[1, 1].plot(batches, [r.beta for r in records], marker="o", ms=3, color="tab:red", label="beta")
    axes[1, 1].set_yscale("log")
    twin = axes[1, 1].twinx()
    twin.plot(batches, [r.kl for r in records], marker="x", ms=3, color="tab:purple", label="KL")
    axes[1, 1].set_title("KL controller (beta log-scale, KL right)")
    axes[1, 1].set_xlabel("batch")
    fig.suptitle("training curve")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_eval_csv(report, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "precision", "recall", "n_generated", "generated"])
        for row in report.per_prompt:
            writer.writerow(
                [
                    row.id,
                    f"{row.precision:.6f}",
                    f"{row.recall:.6f}",
                    len(row.generated),
                    " ".join(c.tool for c in row.generated),
                ]
            )
    return path


def render_eval_figure(report, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    labels = ["precision", "recall", "F1"]
    values = [report.mean_precision, report.mean_recall, report.f1]
    bars = left.bar(labels, values, color=["tab:blue", "tab:orange", "tab:green"])
    left.set_ylim(0, 1.05)
    left.bar_label(bars, fmt="%.3f")
    left.set_title(f"aggregate (mode={report.mode}, n={len(report.per_prompt)})")
    right.hist(
        [r.recall for r in report.per_prompt],
        bins=10,
        range=(0, 1),
        color="tab:orange",
        alpha=0.8,
    )
    right.set_title("per-prompt recall distribution")
    right.set_xlabel("recall")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
