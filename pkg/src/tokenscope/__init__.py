"""Crypto-analysis chat engine: tool-call planning MDP with simulated
execution, hybrid syntactic + judge reward, a desk-scale PPO lab, a
plan-quality evaluation harness, the data-analytics tools and report agents,
and a streaming chat service."""

__version__ = "0.1.0"
