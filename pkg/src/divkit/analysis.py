"""Pass@k, difficulty bucketing, and divergence-vs-performance regression."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .divergence import ModelDivergence
from .errors import DomainError

__all__ = [
    "TrialMatrix",
    "RegressionFit",
    "DifficultyBuckets",
    "ModelRow",
    "pass_at_k",
    "fit_line",
    "bucket_by_difficulty",
    "divergence_performance_table",
]


@dataclass(frozen=True)
class TrialMatrix:
    """Ordered per-question correctness trials for one model.

    Row order is question order; within a row, trial order is generation
    order (the first entry is the model's first attempt).
    """

    model_id: str
    question_ids: tuple[str, ...]
    rows: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "question_ids", tuple(self.question_ids))
        object.__setattr__(self, "rows", tuple(tuple(bool(v) for v in r) for r in self.rows))
        if len(self.question_ids) != len(self.rows):
            raise DomainError("one row per question required")
        if len(set(self.question_ids)) != len(self.question_ids):
            raise DomainError("duplicate question ids")
        if any(len(r) == 0 for r in self.rows):
            raise DomainError("empty trial row")

    def restrict(self, question_ids) -> "TrialMatrix":
        keep = set(question_ids)
        pairs = [(q, r) for q, r in zip(self.question_ids, self.rows) if q in keep]
        if not pairs:
            raise DomainError("restriction leaves no questions")
        qids, rows = zip(*pairs)
        return TrialMatrix(self.model_id, qids, rows)


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class DifficultyBuckets:
    """Partition of questions into easy/medium/hard by mean success rate."""

    easy: frozenset[str]
    medium: frozenset[str]
    hard: frozenset[str]
    thresholds: tuple[float, float]


@dataclass(frozen=True)
class ModelRow:
    model_id: str
    zeta: float
    pass_rate: float


def pass_at_k(matrix: TrialMatrix, k: int, estimator: bool = False) -> float:
    """Fraction of questions solved within the first k trials.

    Literal mode checks the first k trials of each row (k=1 is first-trial
    success).  Estimator mode averages the unbiased combinatorial estimate
    1 - C(n-c, k)/C(n, k) per row instead.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    short = [q for q, r in zip(matrix.question_ids, matrix.rows) if len(r) < k]
    if short:
        raise DomainError(f"rows shorter than k={k}: {short[:3]}")
    if not estimator:
        hits = sum(1 for row in matrix.rows if any(row[:k]))
        return hits / len(matrix.rows)
    values = []
    for row in matrix.rows:
        n = len(row)
        c = sum(row)
        values.append(1.0 - math.comb(n - c, k) / math.comb(n, k))
    return float(np.mean(values))


def fit_line(xs: Sequence[float], ys: Sequence[float]) -> RegressionFit:
    """Ordinary least squares fit with the coefficient of determination.

    Constant ys fit a flat line and report R^2 = 0 (no variance to explain).
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2 or x.size != y.size:
        raise DomainError("need at least two paired points")
    if np.all(x == x[0]):
        raise DomainError("zero x-variance")
    x_mean = x.mean()
    y_mean = y.mean()
    slope = float(((x - x_mean) * (y - y_mean)).sum() / ((x - x_mean) ** 2).sum())
    intercept = float(y_mean - slope * x_mean)
    ss_res = float(((y - (slope * x + intercept)) ** 2).sum())
    ss_tot = float(((y - y_mean) ** 2).sum())
    r_squared = 0.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RegressionFit(slope=slope, intercept=intercept, r_squared=max(0.0, r_squared))


def _nearest_rank(sorted_values: Sequence[float], percentile: float) -> float:
    rank = max(1, math.ceil(percentile / 100.0 * len(sorted_values)))
    return sorted_values[rank - 1]


def bucket_by_difficulty(success_rates: Mapping[str, float]) -> DifficultyBuckets:
    """Split questions at the 33rd/66th percentiles of mean success rate.

    Lower success means harder; ties at a threshold go to the harder bucket.
    Nearest-rank percentile convention.
    """
    if len(success_rates) < 3:
        raise DomainError("need at least three questions to bucket")
    ordered = sorted(success_rates.values())
    p33 = _nearest_rank(ordered, 33.0)
    p66 = _nearest_rank(ordered, 66.0)
    easy, medium, hard = set(), set(), set()
    for qid, rate in success_rates.items():
        if rate <= p33:
            hard.add(qid)
        elif rate <= p66:
            medium.add(qid)
        else:
            easy.add(qid)
    return DifficultyBuckets(
        easy=frozenset(easy),
        medium=frozenset(medium),
        hard=frozenset(hard),
        thresholds=(p33, p66),
    )


def divergence_performance_table(
    models: Sequence[tuple[ModelDivergence, TrialMatrix]],
    divergence_half: Sequence[str],
    evaluation_half: Sequence[str],
    k: int = 1,
    estimator: bool = False,
) -> list[ModelRow]:
    """One row per model: divergence on one half, pass@k on the other.

    The halves must be disjoint so the two quantities stay independent.
    Questions missing from a model's divergence map count as zero (the
    no-correct-solutions fill).  Rows come back sorted by model id.
    """
    div_half = set(divergence_half)
    eval_half = set(evaluation_half)
    if div_half & eval_half:
        raise DomainError("divergence and evaluation halves overlap")
    if not div_half or not eval_half:
        raise DomainError("both halves must be non-empty")
    rows = []
    for model_div, trials in models:
        zeta = sum(model_div.per_question.get(q, 0.0) for q in div_half) / len(div_half)
        rate = pass_at_k(trials.restrict(eval_half), k, estimator=estimator)
        rows.append(ModelRow(model_id=trials.model_id, zeta=zeta, pass_rate=rate))
    return sorted(rows, key=lambda r: r.model_id)
