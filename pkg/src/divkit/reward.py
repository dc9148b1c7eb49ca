"""Divergence-fused rewards, group advantages, and the clipped token objective.

A correct solution is paid its mean divergence to the other correct solutions
in the group, scaled by the group success ratio raised to ``alpha``; an
incorrect one pays a flat penalty.  The group total has an exact closed form
used here only as a test oracle: production scoring is always the literal
per-solution sum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .divergence import SolutionSet, divergence_matrix
from .errors import DomainError

__all__ = [
    "BaselineMode",
    "RewardConfig",
    "GroupScore",
    "TokenBatch",
    "ObjectiveConfig",
    "solution_reward",
    "group_rewards",
    "binary_group_rewards",
    "closed_form_group_total",
    "binary_reward",
    "advantages",
    "token_objective",
]

DEGENERATE_STD = 1e-8


class BaselineMode(enum.Enum):
    PLUS_MINUS_ONE = "plus_minus_one"
    ZERO_ONE = "zero_one"


@dataclass(frozen=True)
class RewardConfig:
    """Scaling exponent and penalty for the fused reward."""

    alpha: float = 4.0
    incorrect_penalty: float = -1.0
    baseline_mode: BaselineMode = BaselineMode.PLUS_MINUS_ONE

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise DomainError("alpha must be finite")


@dataclass(frozen=True)
class GroupScore:
    """Per-solution rewards for one generation group, plus derived values."""

    per_solution: tuple[float, ...]
    total: float
    correct_count: int
    group_size: int
    advantages: tuple[float, ...]


@dataclass(frozen=True)
class ObjectiveConfig:
    """Clip radius for the token-level objective."""

    epsilon: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class TokenBatch:
    """Token probability pairs (current, old) per solution, one advantage each.

    Probabilities must be strictly positive; each solution's advantage is
    broadcast over its tokens.
    """

    current: tuple[tuple[float, ...], ...]
    old: tuple[tuple[float, ...], ...]
    advantages: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "current", tuple(tuple(s) for s in self.current))
        object.__setattr__(self, "old", tuple(tuple(s) for s in self.old))
        object.__setattr__(self, "advantages", tuple(self.advantages))
        if len(self.current) != len(self.old):
            raise DomainError("current/old sequence counts differ")
        if len(self.advantages) != len(self.current):
            raise DomainError("one advantage per solution required")
        for cur, old in zip(self.current, self.old):
            if len(cur) != len(old):
                raise DomainError("current/old token counts differ within a solution")
            if len(cur) == 0:
                raise DomainError("empty token sequence")
            if any(p <= 0 for p in cur) or any(p <= 0 for p in old):
                raise DomainError("invalid probability")


def _verdicts(group: SolutionSet) -> list[bool]:
    verdicts = []
    for s in group.solutions:
        if s.correct is None:
            raise DomainError(f"unverified solution {s.id!r}")
        verdicts.append(bool(s.correct))
    return verdicts


def solution_reward(
    index: int,
    group: SolutionSet,
    delta: np.ndarray,
    config: RewardConfig = RewardConfig(),
) -> float:
    """Fused reward for one solution of a verified group.

    Incorrect solutions earn the flat penalty.  A correct one earns
    ``(c/s)^alpha * mean divergence to the correct subset`` where the mean
    runs over all correct solutions including itself (zero self-term).
    """
    if len(group) == 0:
        raise DomainError("empty solution set")
    if not 0 <= index < len(group):
        raise DomainError(f"solution index {index} out of range")
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (len(group), len(group)):
        raise DomainError("delta matrix does not match group size")
    verdicts = _verdicts(group)
    if not verdicts[index]:
        return config.incorrect_penalty
    correct_idx = [i for i, v in enumerate(verdicts) if v]
    ratio = len(correct_idx) / len(group)
    mean_div = float(delta[index, correct_idx].sum()) / len(correct_idx)
    return ratio**config.alpha * mean_div


def group_rewards(
    group: SolutionSet,
    delta: np.ndarray | None = None,
    config: RewardConfig = RewardConfig(),
) -> GroupScore:
    """Score a whole group: per-solution rewards, total, and advantages."""
    if len(group) == 0:
        raise DomainError("empty solution set")
    if delta is None:
        delta = divergence_matrix(group)
    rewards = [solution_reward(i, group, delta, config) for i in range(len(group))]
    adv = advantages(rewards)
    return GroupScore(
        per_solution=tuple(rewards),
        total=float(sum(rewards)),
        correct_count=sum(_verdicts(group)),
        group_size=len(group),
        advantages=tuple(float(a) for a in adv),
    )


def binary_group_rewards(
    group: SolutionSet,
    mode: BaselineMode = BaselineMode.PLUS_MINUS_ONE,
) -> GroupScore:
    """Score a group with the success-only baseline reward."""
    if len(group) == 0:
        raise DomainError("empty solution set")
    verdicts = _verdicts(group)
    rewards = [binary_reward(v, mode) for v in verdicts]
    adv = advantages(rewards)
    return GroupScore(
        per_solution=tuple(rewards),
        total=float(sum(rewards)),
        correct_count=sum(verdicts),
        group_size=len(group),
        advantages=tuple(float(a) for a in adv),
    )


def closed_form_group_total(
    correct_count: int,
    group_size: int,
    zeta_g_correct_subset: float,
    alpha: float,
) -> float:
    """Exact group total: (c/s)^alpha * zeta_g(correct subset) + c - s.

    Test oracle only; production scoring sums the per-solution rewards.
    """
    if not 0 <= correct_count <= group_size or group_size < 1:
        raise DomainError("invalid correct/group counts")
    if correct_count == 0:
        return float(-group_size)
    ratio = correct_count / group_size
    return ratio**alpha * zeta_g_correct_subset + correct_count - group_size


def binary_reward(verdict: bool, mode: BaselineMode = BaselineMode.PLUS_MINUS_ONE) -> float:
    """Success-only baseline reward: +1/-1 by default, or 1/0."""
    if mode is BaselineMode.PLUS_MINUS_ONE:
        return 1.0 if verdict else -1.0
    return 1.0 if verdict else 0.0


def advantages(rewards: Sequence[float]) -> np.ndarray:
    """Group-relative advantages: (r - mean) / population std.

    Degenerate groups (std below 1e-8) get all-zero advantages.
    """
    r = np.asarray(rewards, dtype=float)
    if r.size == 0:
        raise DomainError("empty reward list")
    std = float(r.std())
    if std < DEGENERATE_STD:
        return np.zeros_like(r)
    return (r - r.mean()) / std


def token_objective(batch: TokenBatch, config: ObjectiveConfig = ObjectiveConfig()) -> float:
    """Clipped policy objective averaged over every token of every solution.

    Each token contributes ``min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)``
    with ratio = current/old probability; the sum is divided by the total
    token count.  No KL term.
    """
    total = 0.0
    tokens = 0
    lo, hi = 1.0 - config.epsilon, 1.0 + config.epsilon
    for cur, old, adv in zip(batch.current, batch.old, batch.advantages):
        ratios = np.asarray(cur, dtype=float) / np.asarray(old, dtype=float)
        clipped = np.clip(ratios, lo, hi)
        total += float(np.minimum(ratios * adv, clipped * adv).sum())
        tokens += len(cur)
    return total / tokens
