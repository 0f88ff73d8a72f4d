"""Terminal trajectory reward: hybrid of judge score and syntactic correctness.

total = w_judge * r_judge + w_correct * r_correct, with the default weights
0.7 / 0.3. Pure arithmetic over already-computed pieces; no backend calls.
The breakdown retains every intermediate for audit logs, and training and
evaluation consume the same structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .calls import CorrectnessConfig, Violation, correctness_score
from .judge import JudgeConfig, JudgeScores, semantic_reward


@dataclass(frozen=True)
class RewardConfig:
    w_judge: float = 0.7
    w_correct: float = 0.3
    correctness: CorrectnessConfig = field(default_factory=CorrectnessConfig)
    judge: JudgeConfig = field(default_factory=JudgeConfig)

    def __post_init__(self):
        if abs(self.w_judge + self.w_correct - 1.0) > 1e-9:
            raise ValueError("w_judge + w_correct must equal 1")


@dataclass(frozen=True)
class RewardBreakdown:
    r_judge: float
    r_correct: float
    total: float
    violations: tuple[Violation, ...] = ()
    scores: JudgeScores = field(default_factory=lambda: JudgeScores(0.0, 0.0))
    flagged: bool = False

    def to_dict(self) -> dict:
        return {
            "r_judge": self.r_judge,
            "r_correct": self.r_correct,
            "total": self.total,
            "violations": [
                {"kind": v.kind, "penalty": v.penalty, "detail": v.detail}
                for v in self.violations
            ],
            "scores": {
                "information_coverage": self.scores.coverage,
                "relevance": self.scores.relevance,
            },
            "flagged": self.flagged,
        }


def trajectory_reward(
    query: str,
    history,
    violations,
    scores: JudgeScores,
    config: RewardConfig | None = None,
    flagged: bool = False,
) -> RewardBreakdown:
    """Compose the terminal reward from violations and judge scores.

    ``query`` and ``history`` identify the episode for auditing; the
    arithmetic needs only the violations and scores, which must have been
    computed over that same episode.
    """
    cfg = config or RewardConfig()
    r_correct = correctness_score(violations, cfg.correctness)
    r_judge = semantic_reward(scores, cfg.judge)
    total = cfg.w_judge * r_judge + cfg.w_correct * r_correct
    return RewardBreakdown(
        r_judge=r_judge,
        r_correct=r_correct,
        total=total,
        violations=tuple(violations),
        scores=scores,
        flagged=flagged,
    )
