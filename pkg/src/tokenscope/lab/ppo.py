"""Policy-gradient machinery with closed-form gradients.

The objective is implemented as printed in its source formulation:
mean over the batch of  pi(a|s) * advantage  -  beta * KL(pi_old || pi),
i.e. probability (not the usual importance ratio) times advantage. A config
flag substitutes the standard clipped-ratio surrogate for experimentation;
the default keeps the printed form. The critic minimizes plain mean squared
error against the episode reward, and beta follows a banded multiplicative
controller around the KL target.

No autodiff: the softmax-linear policy and linear critic admit closed-form
gradients, and grad_check verifies them against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..episode import Trajectory
from ..registry import ToolCatalog
from .features import featurize
from .policy import ToyPolicy, ValueEstimator, action_slot


@dataclass(frozen=True)
class SamplingConfig:
    temperature: float = 0.7
    top_p: float = 0.8


@dataclass(frozen=True)
class PPOConfig:
    # Toy-scale learning rate; the LLM-scale reference value is 5e-6.
    learning_rate: float = 1e-2
    critic_learning_rate: float = 5e-2
    batch_size: int = 8
    epochs: int = 3
    # Inner gradient steps per batch: enough for the beta-weighted KL leash,
    # not the step budget, to bound each batch's policy movement.
    steps_per_batch: int = 6000
    kl_target: float = 0.01
    beta_init: float = 0.1
    gamma: float = 1.0
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    seed: int = 7
    max_episodes: int | None = None
    clip_epsilon: float = 0.2
    # Deviation flag: standard clipped-ratio PPO surrogate instead of the
    # printed probability-times-advantage form. Off by default.
    use_clipped_ratio: bool = False

    def __post_init__(self):
        if self.learning_rate < 0 or self.critic_learning_rate < 0:
            raise ValueError("learning rates must be nonnegative")
        if self.kl_target <= 0 or self.beta_init <= 0:
            raise ValueError("kl_target and beta_init must be positive")
        if self.batch_size < 1 or self.epochs < 1 or self.steps_per_batch < 1:
            raise ValueError("batch_size, epochs and steps_per_batch must be >= 1")
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError("gamma must be in (0, 1]")


@dataclass(frozen=True)
class Sample:
    """One decision point: state features, chosen action slot, advantage, and
    the episode reward the critic regresses to."""

    features: np.ndarray
    action: int
    advantage: float
    reward: float


def advantage_estimate(
    trajectory: Trajectory, critic: ValueEstimator, catalog: ToolCatalog, gamma: float = 1.0
) -> list[Sample]:
    """Terminal reward broadcast to each step: A_t = gamma^(T-t) * R - V(s_t)."""
    if trajectory.reward is None:
        raise ValueError("trajectory must be scored before advantage estimation")
    reward = trajectory.reward.total
    horizon = len(trajectory.actions)
    samples = []
    for t, action in enumerate(trajectory.actions):
        features = featurize(trajectory.states[t], catalog)
        first_tool = action.calls[0].tool if action.calls else None
        idx = action_slot(action.kind, first_tool, catalog)
        discounted = (gamma ** (horizon - t)) * reward
        samples.append(
            Sample(
                features=features,
                action=idx,
                advantage=discounted - critic.value(features),
                reward=discounted,
            )
        )
    return samples


def kl_divergence(q: np.ndarray, p: np.ndarray) -> float:
    """KL(q || p) with the 0 log 0 = 0 convention."""
    mask = q > 0
    return float(np.sum(q[mask] * (np.log(q[mask]) - np.log(p[mask]))))


def ppo_objective(
    policy: ToyPolicy,
    old_policy: ToyPolicy,
    batch: list[Sample],
    beta: float,
    use_clipped_ratio: bool = False,
    clip_epsilon: float = 0.2,
) -> float:
    return _objective_and_grad(
        policy, old_policy, batch, beta, use_clipped_ratio, clip_epsilon, want_grad=False
    )[0]


def ppo_objective_grad(
    policy: ToyPolicy,
    old_policy: ToyPolicy,
    batch: list[Sample],
    beta: float,
    use_clipped_ratio: bool = False,
    clip_epsilon: float = 0.2,
) -> tuple[float, np.ndarray]:
    return _objective_and_grad(
        policy, old_policy, batch, beta, use_clipped_ratio, clip_epsilon, want_grad=True
    )


def _batch_arrays(batch):
    features = np.stack([s.features for s in batch])
    actions = np.asarray([s.action for s in batch], dtype=np.intp)
    advantages = np.asarray([s.advantage for s in batch])
    return features, actions, advantages


def _row_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _objective_and_grad(policy, old_policy, batch, beta, use_clipped_ratio, clip_epsilon, want_grad):
    if not batch:
        raise ValueError("batch must be non-empty")
    features, actions, advantages = _batch_arrays(batch)
    n = len(batch)
    rows = np.arange(n)
    p = _row_softmax(features @ policy.weights.T)  # (n, A)
    q = _row_softmax(features @ old_policy.weights.T)
    p_a = p[rows, actions]
    kl_terms = np.sum(q * (np.log(q) - np.log(p)), axis=1)
    if use_clipped_ratio:
        q_a = np.maximum(q[rows, actions], 1e-12)
        ratio = p_a / q_a
        clipped = np.clip(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon)
        surrogate = np.minimum(ratio * advantages, clipped * advantages)
        active = ratio * advantages <= clipped * advantages
    else:
        surrogate = p_a * advantages
        active = np.ones(n, dtype=bool)
    total = float(np.mean(surrogate - beta * kl_terms))
    if not want_grad:
        return total, None
    # d p_a / d z_k = p_a (delta_ak - p_k);  d KL(q||p) / d z_k = p_k - q_k
    coeff = advantages * p_a
    if use_clipped_ratio:
        coeff = np.where(active, advantages * p_a / np.maximum(q[rows, actions], 1e-12), 0.0)
    dz = -coeff[:, None] * p
    np.add.at(dz, (rows, actions), coeff)
    dz -= beta * (p - q)
    grad = dz.T @ features / n
    return total, grad


def critic_loss(critic: ValueEstimator, batch: list[Sample]) -> float:
    return _critic_loss_and_grad(critic, batch, want_grad=False)[0]


def critic_loss_grad(critic: ValueEstimator, batch: list[Sample]) -> tuple[float, np.ndarray]:
    return _critic_loss_and_grad(critic, batch, want_grad=True)


def _critic_loss_and_grad(critic, batch, want_grad):
    if not batch:
        raise ValueError("batch must be non-empty")
    features = np.stack([s.features for s in batch])
    targets = np.asarray([s.reward for s in batch])
    errors = features @ critic.weights - targets
    loss = float(np.mean(errors**2))
    if want_grad:
        grad = 2.0 * (features.T @ errors) / len(batch)
        return loss, grad
    return loss, None


def kl_controller_update(beta: float, observed_kl: float, kl_target: float) -> float:
    """Banded multiplicative controller: double beta when divergence runs
    more than 1.5x over target, halve it below target/1.5."""
    if beta <= 0 or kl_target <= 0 or observed_kl < 0:
        raise ValueError("beta and kl_target must be positive, observed_kl nonnegative")
    if observed_kl > 1.5 * kl_target:
        return beta * 2.0
    if observed_kl < kl_target / 1.5:
        return beta / 2.0
    return beta


def mean_kl(old_policy: ToyPolicy, policy: ToyPolicy, batch: list[Sample]) -> float:
    return float(
        np.mean(
            [
                kl_divergence(
                    old_policy.probabilities(s.features), policy.probabilities(s.features)
                )
                for s in batch
            ]
        )
    )


def grad_check(
    objective: str,
    model,
    batch: list[Sample],
    epsilon: float = 1e-5,
    old_policy: ToyPolicy | None = None,
    beta: float = 0.1,
) -> float:
    """Central finite differences vs the analytic gradient.

    objective='ppo' checks the policy objective (model: ToyPolicy, old_policy
    defaults to the model itself); objective='critic' checks the value loss
    (model: ValueEstimator). Returns the max over coordinates of relative
    error, with a small floor in the denominator so exact zeros compare
    cleanly.
    """
    if not (1e-7 <= epsilon <= 1e-3):
        raise ValueError("epsilon out of range")
    if objective == "ppo":
        old = old_policy if old_policy is not None else model
        _, analytic = ppo_objective_grad(model, old, batch, beta)

        def evaluate(flat):
            probe = model.copy()
            probe.weights = flat.reshape(model.weights.shape)
            return ppo_objective(probe, old, batch, beta)

        theta = model.weights.ravel().copy()
    elif objective == "critic":
        _, analytic = critic_loss_grad(model, batch)

        def evaluate(flat):
            return critic_loss(ValueEstimator(weights=flat), batch)

        theta = model.weights.copy()
    else:
        raise ValueError(f"unknown objective {objective!r}")

    analytic_flat = analytic.ravel()
    numeric = np.zeros_like(theta)
    for i in range(len(theta)):
        up, down = theta.copy(), theta.copy()
        up[i] += epsilon
        down[i] -= epsilon
        numeric[i] = (evaluate(up) - evaluate(down)) / (2.0 * epsilon)
    denom = np.maximum(np.maximum(np.abs(analytic_flat), np.abs(numeric)), 1e-6)
    return float(np.max(np.abs(analytic_flat - numeric) / denom))
