import csv

from tokenscope.evaluation import PromptResult, aggregate
from tokenscope.lab.train import BatchRecord
from tokenscope.reporting import (
    render_curve_figure,
    render_eval_figure,
    write_curve_csv,
    write_eval_csv,
)

PNG_MAGIC = b"\x89PNG"


def records(n=5):
    return [
        BatchRecord(
            batch=i,
            episodes=(i + 1) * 8,
            mean_reward=0.5 + 0.05 * i,
            mean_coverage=4.0 + i,
            mean_relevance=8.0,
            mean_plan_size=1.0 + 0.4 * i,
            beta=0.1 / (2**i),
            kl=0.002 * (i + 1),
            objective=0.1,
            critic_loss=0.05,
        )
        for i in range(n)
    ]


def report():
    rows = [
        PromptResult(id=f"p{i}", generated=(), precision=i / 4, recall=1 - i / 4)
        for i in range(5)
    ]
    return aggregate(rows)


def test_curve_csv_one_row_per_batch(tmp_path):
    path = write_curve_csv(records(), tmp_path / "curve.csv")
    with path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert rows[0]["mean_reward"] == "0.5"
    assert rows[4]["batch"] == "4"


def test_curve_figure_is_png(tmp_path):
    path = render_curve_figure(records(), tmp_path / "curve.png")
    assert path.read_bytes()[:4] == PNG_MAGIC


def test_eval_csv_per_prompt_rows(tmp_path):
    path = write_eval_csv(report(), tmp_path / "report.csv")
    with path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert rows[0]["id"] == "p0"


def test_eval_figure_is_png(tmp_path):
    path = render_eval_figure(report(), tmp_path / "report.png")
    assert path.read_bytes()[:4] == PNG_MAGIC
