"""Desk-scale RL testbed: featurizer, softmax-linear policy, closed-form
policy-gradient machinery, the coverage-proxy judge, and the training loop."""

from .features import (
    FEATURE_SCHEMA_VERSION,
    asks_advice,
    asks_definition,
    feature_names,
    featurize,
    mentions_token,
    query_category,
)
from .policy import (
    ToyPolicy,
    ValueEstimator,
    act,
    action_order,
    action_slot,
    canonical_call,
    sample_index,
)
from .ppo import (
    PPOConfig,
    Sample,
    SamplingConfig,
    advantage_estimate,
    critic_loss,
    critic_loss_grad,
    grad_check,
    kl_controller_update,
    kl_divergence,
    mean_kl,
    ppo_objective,
    ppo_objective_grad,
)
from .proxy_judge import RELEVANT_TOOLS, CoverageProxyJudge, proxy_scores
from .train import BatchRecord, evaluate_policy, make_caller, plan_size, rollout_and_score, train

__all__ = [
    "FEATURE_SCHEMA_VERSION",
    "PPOConfig",
    "Sample",
    "SamplingConfig",
    "BatchRecord",
    "CoverageProxyJudge",
    "RELEVANT_TOOLS",
    "ToyPolicy",
    "ValueEstimator",
    "act",
    "action_order",
    "action_slot",
    "advantage_estimate",
    "asks_advice",
    "asks_definition",
    "canonical_call",
    "critic_loss",
    "critic_loss_grad",
    "evaluate_policy",
    "feature_names",
    "featurize",
    "grad_check",
    "kl_controller_update",
    "kl_divergence",
    "make_caller",
    "mean_kl",
    "mentions_token",
    "plan_size",
    "ppo_objective",
    "ppo_objective_grad",
    "proxy_scores",
    "query_category",
    "rollout_and_score",
    "sample_index",
    "train",
]
