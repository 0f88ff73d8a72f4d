"""Synchronous on-policy training loop for the toy policy.

Each batch: roll episodes in the simulated environment with stochastic
sampling, score every trajectory with the hybrid terminal reward, broadcast
it to per-step advantages against the linear critic, then take a few
gradient steps (ascent on the policy objective, descent on the value loss)
and let the banded controller adjust beta from the measured divergence
against the frozen batch-start policy.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from ..episode import EnvConfig, EpisodeState, Trajectory, run_episode
from ..gateway import Backend
from ..judge import judge as judge_call
from ..registry import ToolCatalog
from ..rewards import RewardConfig, trajectory_reward
from .features import featurize
from .policy import ToyPolicy, ValueEstimator, act
from .ppo import (
    PPOConfig,
    Sample,
    advantage_estimate,
    critic_loss_grad,
    kl_controller_update,
    mean_kl,
    ppo_objective_grad,
)


@dataclass
class BatchRecord:
    batch: int
    episodes: int
    mean_reward: float
    mean_coverage: float
    mean_relevance: float
    mean_plan_size: float
    beta: float
    kl: float
    objective: float
    critic_loss: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def make_caller(
    policy: ToyPolicy,
    catalog: ToolCatalog,
    mode: str = "greedy",
    rng: np.random.Generator | None = None,
    temperature: float = 0.7,
    top_p: float = 0.8,
):
    def caller(state: EpisodeState) -> str:
        return act(policy, featurize(state, catalog), mode, rng, temperature, top_p)

    return caller


def plan_size(trajectory: Trajectory) -> int:
    """Distinct tools in the episode's call history."""
    return len({c.tool for c in trajectory.history})


def rollout_and_score(
    policy_caller,
    query: str,
    catalog: ToolCatalog,
    env_config: EnvConfig,
    reward_config: RewardConfig,
    judge_backend: Backend,
) -> Trajectory:
    """One scored episode: simulated rollout, judge scoring, hybrid reward."""
    traj = run_episode(policy_caller, query, catalog, env_config)
    verdict = judge_call(query, traj.history, catalog, judge_backend, reward_config.judge)
    traj.reward = trajectory_reward(
        query, traj.history, traj.violations, verdict.scores, reward_config, verdict.flagged
    )
    return traj


def train(
    prompts: list[str],
    catalog: ToolCatalog,
    env_config: EnvConfig | None = None,
    reward_config: RewardConfig | None = None,
    ppo_config: PPOConfig | None = None,
    judge_backend: Backend | None = None,
    policy: ToyPolicy | None = None,
) -> tuple[ToyPolicy, list[BatchRecord]]:
    """Train and return (policy, per-batch learning curve).

    Training rollouts never stall on a broken judge: the judge config is
    forced to zero_with_flag, and flagged trajectories surface in the curve
    via their zero scores.
    """
    if not prompts:
        raise ValueError("no training prompts")
    if judge_backend is None:
        raise ValueError("a judge backend is required (live or coverage proxy)")
    env_config = env_config or EnvConfig()
    cfg = ppo_config or PPOConfig()
    reward_config = reward_config or RewardConfig()
    reward_config = dataclasses.replace(
        reward_config,
        judge=dataclasses.replace(reward_config.judge, unparsable_policy="zero_with_flag"),
    )

    rng = np.random.default_rng(cfg.seed)
    policy = policy if policy is not None else ToyPolicy.zeros(catalog)
    critic = ValueEstimator.zeros(len(policy.feature_names))
    beta = cfg.beta_init
    curve: list[BatchRecord] = []
    episodes_done = 0
    batch_idx = 0

    for _epoch in range(cfg.epochs):
        order = rng.permutation(len(prompts))
        for start in range(0, len(order), cfg.batch_size):
            if cfg.max_episodes is not None and episodes_done >= cfg.max_episodes:
                return policy, curve
            batch_prompts = [prompts[i] for i in order[start : start + cfg.batch_size]]
            if cfg.max_episodes is not None:
                batch_prompts = batch_prompts[: cfg.max_episodes - episodes_done]

            sampler = make_caller(
                policy, catalog, "sample", rng, cfg.sampling.temperature, cfg.sampling.top_p
            )
            trajectories = [
                rollout_and_score(sampler, q, catalog, env_config, reward_config, judge_backend)
                for q in batch_prompts
            ]
            episodes_done += len(trajectories)

            samples: list[Sample] = []
            for traj in trajectories:
                samples.extend(advantage_estimate(traj, critic, catalog, cfg.gamma))

            old_policy = policy.copy()
            objective = 0.0
            value_loss = 0.0
            for _ in range(cfg.steps_per_batch):
                objective, policy_grad = ppo_objective_grad(
                    policy, old_policy, samples, beta, cfg.use_clipped_ratio, cfg.clip_epsilon
                )
                policy.weights = policy.weights + cfg.learning_rate * policy_grad
                value_loss, critic_grad = critic_loss_grad(critic, samples)
                critic.weights = critic.weights - cfg.critic_learning_rate * critic_grad

            observed_kl = mean_kl(old_policy, policy, samples)
            beta = kl_controller_update(beta, observed_kl, cfg.kl_target)

            curve.append(
                BatchRecord(
                    batch=batch_idx,
                    episodes=episodes_done,
                    mean_reward=float(np.mean([t.reward.total for t in trajectories])),
                    mean_coverage=float(np.mean([t.reward.scores.coverage for t in trajectories])),
                    mean_relevance=float(np.mean([t.reward.scores.relevance for t in trajectories])),
                    mean_plan_size=float(np.mean([plan_size(t) for t in trajectories])),
                    beta=beta,
                    kl=observed_kl,
                    objective=objective,
                    critic_loss=value_loss,
                )
            )
            batch_idx += 1
    return policy, curve


def evaluate_policy(
    policy: ToyPolicy,
    prompts: list[str],
    catalog: ToolCatalog,
    env_config: EnvConfig | None = None,
    reward_config: RewardConfig | None = None,
    judge_backend: Backend | None = None,
) -> dict:
    """Greedy evaluation over a fixed prompt set: mean reward/coverage/plan
    size plus the per-prompt trajectories."""
    env_config = env_config or EnvConfig()
    reward_config = reward_config or RewardConfig()
    caller = make_caller(policy, catalog, "greedy")
    trajectories = []
    for q in prompts:
        if judge_backend is not None:
            trajectories.append(
                rollout_and_score(caller, q, catalog, env_config, reward_config, judge_backend)
            )
        else:
            trajectories.append(run_episode(caller, q, catalog, env_config))
    summary = {
        "mean_plan_size": float(np.mean([plan_size(t) for t in trajectories])),
        "trajectories": trajectories,
    }
    if judge_backend is not None:
        summary["mean_reward"] = float(np.mean([t.reward.total for t in trajectories]))
        summary["mean_coverage"] = float(np.mean([t.reward.scores.coverage for t in trajectories]))
    return summary
