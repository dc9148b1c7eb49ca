"""Divergence-driven dataset curation.

Two tools: exhaustive selection of the most- and least-divergent k-subsets of
a correct-solution pool (for building paired high/low training splits), and a
greedy accept/reject rule for a single add-or-remove edit of a solution set.
Subset divergence is the closed-form global value, which ranks identically to
either spectral variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .divergence import Solution, SolutionSet, divergence_matrix, divergence_global
from .errors import DomainError

__all__ = [
    "CandidatePool",
    "SelectionResult",
    "GreedyDecision",
    "select_extremal_subsets",
    "greedy_update",
    "build_sft_splits",
]

SUBSET_GUARD = 10**6


@dataclass(frozen=True)
class CandidatePool:
    """Verified-correct candidate solutions for one question."""

    question_id: str
    candidates: tuple[Solution, ...]
    k: int = 4

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if self.k < 1:
            raise DomainError("subset size k must be at least 1")
        if len(self.candidates) < self.k:
            raise DomainError(
                f"pool {self.question_id!r} has {len(self.candidates)} candidates, needs >= {self.k}"
            )
        ids = [s.id for s in self.candidates]
        if len(set(ids)) != len(ids):
            raise DomainError(f"duplicate candidate ids in pool {self.question_id!r}")
        for s in self.candidates:
            if not s.correct:
                raise DomainError(f"candidate {s.id!r} is not verified correct")


@dataclass(frozen=True)
class SelectionResult:
    """Extremal subsets of one pool, with their divergence values."""

    question_id: str
    plus_ids: tuple[str, ...]
    plus_zeta: float
    minus_ids: tuple[str, ...]
    minus_zeta: float
    subsets_examined: int


@dataclass(frozen=True)
class GreedyDecision:
    """Outcome of one accept/reject edit, with both values for audit."""

    accepted: bool
    zeta_before: float
    zeta_after: float
    result: SolutionSet


def _subset_zeta(delta, indices: tuple[int, ...]) -> float:
    # fsum is order-independent, so equal subsets tie exactly no matter how
    # the candidates were ordered
    pairs = [
        delta[indices[a], indices[b]]
        for a in range(len(indices))
        for b in range(a + 1, len(indices))
    ]
    return 2.0 * math.fsum(pairs) / len(indices)


def select_extremal_subsets(pool: CandidatePool) -> SelectionResult:
    """Exhaustively score every k-subset; return the argmax and argmin.

    Ties break toward the lexicographically smallest sorted id tuple so the
    result is independent of candidate order.
    """
    n = len(pool.candidates)
    count = math.comb(n, pool.k)
    if count > SUBSET_GUARD:
        raise DomainError(f"{count} subsets exceed the {SUBSET_GUARD} guard")
    delta = divergence_matrix(SolutionSet(pool.question_id, pool.candidates))
    best_max: tuple[float, tuple[str, ...]] | None = None
    best_min: tuple[float, tuple[str, ...]] | None = None
    for indices in combinations(range(n), pool.k):
        zeta = _subset_zeta(delta, indices)
        key = tuple(sorted(pool.candidates[i].id for i in indices))
        if best_max is None or zeta > best_max[0] or (zeta == best_max[0] and key < best_max[1]):
            best_max = (zeta, key)
        if best_min is None or zeta < best_min[0] or (zeta == best_min[0] and key < best_min[1]):
            best_min = (zeta, key)
    assert best_max is not None and best_min is not None
    return SelectionResult(
        question_id=pool.question_id,
        plus_ids=best_max[1],
        plus_zeta=best_max[0],
        minus_ids=best_min[1],
        minus_zeta=best_min[0],
        subsets_examined=count,
    )


def greedy_update(
    current: SolutionSet,
    add: Solution | None = None,
    remove: str | None = None,
) -> GreedyDecision:
    """Accept an add/remove edit iff it strictly raises global divergence.

    Exactly one of ``add`` / ``remove`` must be given.  Rejected edits leave
    the set untouched; both divergence values are returned for the audit
    trail.
    """
    if (add is None) == (remove is None):
        raise DomainError("give exactly one of add or remove")
    if len(current) == 0:
        raise DomainError("empty solution set")
    if add is not None:
        if any(s.id == add.id for s in current.solutions):
            raise DomainError(f"duplicate id {add.id!r}")
        edited = SolutionSet(current.question_id, (*current.solutions, add), current.origin)
    else:
        if not any(s.id == remove for s in current.solutions):
            raise DomainError(f"unknown id {remove!r}")
        kept = tuple(s for s in current.solutions if s.id != remove)
        if not kept:
            raise DomainError("removal would empty the set")
        edited = SolutionSet(current.question_id, kept, current.origin)
    zeta_before = divergence_global(current)
    zeta_after = divergence_global(edited)
    accepted = zeta_after > zeta_before
    return GreedyDecision(
        accepted=accepted,
        zeta_before=zeta_before,
        zeta_after=zeta_after,
        result=edited if accepted else current,
    )


def build_sft_splits(pools: Iterable[CandidatePool]) -> tuple[list[dict], list[dict]]:
    """Select extremal subsets for every pool and emit two record streams.

    Returns (plus records, minus records); each record is a solutions-schema
    object plus a ``split`` field, k records per question per stream.  Any
    failing pool aborts with its question id.
    """
    plus: list[dict] = []
    minus: list[dict] = []
    for pool in pools:
        try:
            result = select_extremal_subsets(pool)
        except DomainError as exc:
            raise DomainError(f"pool {pool.question_id!r}: {exc}") from exc
        by_id = {s.id: s for s in pool.candidates}
        for split, ids in (("plus", result.plus_ids), ("minus", result.minus_ids)):
            for sid in ids:
                s = by_id[sid]
                record = {
                    "v": 1,
                    "question_id": pool.question_id,
                    "solution_id": s.id,
                    "text": s.text,
                    "correct": True,
                    "split": split,
                }
                (plus if split == "plus" else minus).append(record)
    return plus, minus
