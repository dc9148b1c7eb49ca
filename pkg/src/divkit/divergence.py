"""Pairwise solution divergence and its graph-spectral aggregates.

A group of candidate solutions to one question is compared pairwise with a
normalized string edit distance.  The resulting divergence matrix induces a
complete weighted relation graph (edge weight = similarity = 1 - divergence)
whose Laplacian spectrum yields two set-level metrics:

* global divergence: how spread out the whole set is (trace-based), with an
  exact closed form ``sum(delta) / M``;
* local divergence: sensitivity to the weakest link, ``M - lambda_2`` where
  ``lambda_2`` is the Fiedler value.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "Convention",
    "Solution",
    "SolutionSet",
    "RelationGraph",
    "DivergenceReport",
    "ModelDivergence",
    "levenshtein",
    "normalized_divergence",
    "divergence_matrix",
    "relation_graph",
    "laplacian_matrix",
    "laplacian_spectrum",
    "divergence_global",
    "divergence_local",
    "divergence_report",
    "zeta_global_spectral",
    "zeta_local_spectral",
    "oversample",
    "model_divergence",
]


class Convention(enum.Enum):
    """Laplacian degree convention for the relation graph.

    STANDARD is the combinatorial Laplacian (adjacency diagonal zero, degrees
    sum off-diagonal weights only); its smallest eigenvalue is always 0 and
    the local metric lands in [0, M].  SELF_LOOP adds a unit self-weight to
    every node's degree, shifting each eigenvalue up by one; under it the
    spectral global divergence equals the closed form exactly.
    """

    STANDARD = "standard"
    SELF_LOOP = "self_loop"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Solution:
    """One candidate solution: opaque id, raw text, optional verdict."""

    id: str
    text: str
    correct: bool | None = None

    def __post_init__(self):
        if not self.id:
            raise DomainError("solution id must be non-empty")


@dataclass(frozen=True)
class SolutionSet:
    """An ordered group of solutions to a single question.

    Order is preserved exactly as ingested; ids must be pairwise distinct.
    """

    question_id: str
    solutions: tuple[Solution, ...]
    origin: str = ""

    def __post_init__(self):
        object.__setattr__(self, "solutions", tuple(self.solutions))
        ids = [s.id for s in self.solutions]
        if len(set(ids)) != len(ids):
            raise DomainError(f"duplicate solution ids in set {self.question_id!r}")

    def __len__(self) -> int:
        return len(self.solutions)

    @property
    def texts(self) -> list[str]:
        return [s.text for s in self.solutions]

    def correct_subset(self) -> "SolutionSet":
        """The sub-group of solutions verified correct (order preserved)."""
        kept = tuple(s for s in self.solutions if s.correct)
        return SolutionSet(self.question_id, kept, origin=self.origin)


@dataclass(frozen=True)
class RelationGraph:
    """Complete weighted graph over a solution set; weights are similarities."""

    weights: np.ndarray
    convention: Convention = Convention.STANDARD

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DomainError("weights must be a square matrix")
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def size(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class DivergenceReport:
    """Everything computed for one solution set.

    ``zeta_global`` is the closed form sum(delta)/M (equal to the SELF_LOOP
    spectral value); ``zeta_local`` is M - lambda_2 of the STANDARD Laplacian.
    ``spectrum`` and the two ``*_spectral`` fields are under ``convention``.
    """

    delta: np.ndarray
    spectrum: np.ndarray
    zeta_global: float
    zeta_local: float
    convention: Convention
    zeta_global_spectral: float = 0.0
    zeta_local_spectral: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "delta", _readonly(np.asarray(self.delta, dtype=float)))
        object.__setattr__(self, "spectrum", _readonly(np.asarray(self.spectrum, dtype=float)))

    @property
    def size(self) -> int:
        return self.delta.shape[0]


@dataclass(frozen=True)
class ModelDivergence:
    """Per-question divergence values for one model plus their mean."""

    model_id: str
    per_question: dict[str, float] = field(default_factory=dict)
    aggregate: float = 0.0


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert/delete/substitute, no transposition).

    Row-vectorized with numpy; exact, operates on Unicode scalar values.
    """
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) > len(b):
        a, b = b, a  # iterate over the shorter string
    n = len(b)
    b_codes = np.fromiter(map(ord, b), dtype=np.int64, count=n)
    offsets = np.arange(n + 1, dtype=np.int64)
    prev = offsets.copy()
    cur = np.empty(n + 1, dtype=np.int64)
    for i, ch in enumerate(a, 1):
        cur[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + (b_codes != ord(ch)), out=cur[1:])
        # Insertion chains: cur[j] = min_{k<=j} cur_partial[k] + (j - k),
        # computed exactly with a running minimum of cur - j.
        cur -= offsets
        np.minimum.accumulate(cur, out=cur)
        cur += offsets
        prev, cur = cur, prev
    return int(prev[n])


def normalized_divergence(a: str, b: str) -> float:
    """Edit distance over the longer length, in [0, 1].

    Leading/trailing whitespace is trimmed first; no case folding or token
    normalization.  Two empty strings are identical, divergence 0.
    """
    a = a.strip()
    b = b.strip()
    longer = max(len(a), len(b))
    if longer == 0:
        return 0.0
    return levenshtein(a, b) / longer


def divergence_matrix(solution_set: SolutionSet) -> np.ndarray:
    """Symmetric M x M matrix of pairwise divergences, zero diagonal."""
    m = len(solution_set)
    if m == 0:
        raise DomainError("empty solution set")
    texts = [s.text.strip() for s in solution_set.solutions]
    delta = np.zeros((m, m), dtype=float)
    cache: dict[tuple[str, str], float] = {}
    for i in range(m):
        for j in range(i + 1, m):
            key = (texts[i], texts[j]) if texts[i] <= texts[j] else (texts[j], texts[i])
            d = cache.get(key)
            if d is None:
                d = normalized_divergence(texts[i], texts[j])
                cache[key] = d
            delta[i, j] = delta[j, i] = d
    return _readonly(delta)


def relation_graph(delta: np.ndarray, convention: Convention = Convention.STANDARD) -> RelationGraph:
    """Build the similarity graph (weights 1 - delta, zero diagonal)."""
    delta = np.asarray(delta, dtype=float)
    weights = 1.0 - delta
    np.fill_diagonal(weights, 0.0)
    return RelationGraph(weights, convention)


def laplacian_matrix(graph: RelationGraph) -> np.ndarray:
    """L = D - A; under SELF_LOOP every degree carries an extra self-weight 1."""
    w = graph.weights
    degrees = w.sum(axis=1)
    if graph.convention is Convention.SELF_LOOP:
        degrees = degrees + 1.0
    return np.diag(degrees) - w


def laplacian_spectrum(graph: RelationGraph) -> np.ndarray:
    """Ascending eigenvalues of the graph Laplacian.

    Uses a symmetric eigensolver whose residuals are far below 1e-9 * M for
    the small dense matrices handled here.
    """
    if graph.size < 1:
        raise DomainError("empty solution set")
    if not np.array_equal(graph.weights, graph.weights.T):
        raise DomainError("asymmetric weights")
    return _readonly(np.linalg.eigvalsh(laplacian_matrix(graph)))


def zeta_global_spectral(spectrum: Sequence[float]) -> float:
    """Global divergence from a spectrum: M - mean(eigenvalues)."""
    spectrum = np.asarray(spectrum, dtype=float)
    m = spectrum.shape[0]
    return float(m - spectrum.mean())


def zeta_local_spectral(spectrum: Sequence[float]) -> float:
    """Local divergence from a spectrum: M - lambda_2 (0 for singletons)."""
    spectrum = np.asarray(spectrum, dtype=float)
    m = spectrum.shape[0]
    if m < 2:
        return 0.0
    return float(m - np.sort(spectrum)[1])


def divergence_global(solution_set: SolutionSet) -> float:
    """Closed-form global divergence: (1/M) * sum of all pairwise divergences.

    Equals the SELF_LOOP spectral value exactly and the STANDARD spectral
    value minus one.  Zero for singletons.
    """
    delta = divergence_matrix(solution_set)
    return float(delta.sum() / delta.shape[0])


def divergence_local(solution_set: SolutionSet) -> float:
    """Local divergence M - lambda_2 under the STANDARD Laplacian.

    Defined as 0 for single-solution sets (no Fiedler value).  Sensitive to
    weak local connections: one fully divergent pair disconnects the unit
    similarity graph and pushes the value to M.
    """
    if len(solution_set) == 0:
        raise DomainError("empty solution set")
    if len(solution_set) == 1:
        return 0.0
    delta = divergence_matrix(solution_set)
    spectrum = laplacian_spectrum(relation_graph(delta, Convention.STANDARD))
    return zeta_local_spectral(spectrum)


def divergence_report(
    solution_set: SolutionSet,
    convention: Convention = Convention.STANDARD,
) -> DivergenceReport:
    """Full divergence computation for one solution set."""
    delta = divergence_matrix(solution_set)
    m = delta.shape[0]
    spectrum = laplacian_spectrum(relation_graph(delta, convention))
    zeta_global = float(delta.sum() / m)
    if m == 1:
        zeta_local = 0.0
    elif convention is Convention.STANDARD:
        zeta_local = zeta_local_spectral(spectrum)
    else:
        zeta_local = zeta_local_spectral(
            laplacian_spectrum(relation_graph(delta, Convention.STANDARD))
        )
    return DivergenceReport(
        delta=delta,
        spectrum=spectrum,
        zeta_global=zeta_global,
        zeta_local=zeta_local,
        convention=convention,
        zeta_global_spectral=zeta_global_spectral(spectrum),
        zeta_local_spectral=zeta_local_spectral(spectrum) if m >= 2 else 0.0,
    )


def oversample(
    source: SolutionSet | Sequence[Solution],
    target_size: int,
    seed: int = 0,
    exact: bool = False,
) -> SolutionSet:
    """Grow a set of correct solutions to ``target_size`` by duplication.

    Every original appears at least once; extra members are drawn uniformly
    at random (deterministic per seed).  In ``exact`` mode ``target_size``
    must be a multiple of the source size and each member is repeated the
    same number of times.  Duplicates get derived ids ``<id>+<n>``.
    """
    if isinstance(source, SolutionSet):
        originals = list(source.solutions)
        question_id = source.question_id
    else:
        originals = list(source)
        question_id = ""
    if not originals:
        raise DomainError("no correct solutions")
    if target_size < len(originals):
        raise DomainError(
            f"target size {target_size} is below the source size {len(originals)}"
        )

    counts = [1] * len(originals)
    if exact:
        if target_size % len(originals) != 0:
            raise DomainError(
                f"exact oversampling needs target size divisible by {len(originals)}"
            )
        repeats = target_size // len(originals)
        counts = [repeats] * len(originals)
    else:
        rng = random.Random(seed)
        for _ in range(target_size - len(originals)):
            counts[rng.randrange(len(originals))] += 1

    members: list[Solution] = []
    for original, count in zip(originals, counts):
        members.append(original)
        for n in range(1, count):
            members.append(Solution(f"{original.id}+{n}", original.text, original.correct))
    return SolutionSet(question_id, tuple(members), origin=f"oversample(seed={seed})")


def model_divergence(
    per_question: Mapping[str, float | None],
    zero_fill: bool = True,
    model_id: str = "",
) -> ModelDivergence:
    """Mean divergence over questions for one model.

    ``None`` marks a question with no correct solutions; with ``zero_fill``
    it contributes 0 to the mean, otherwise it is an error.
    """
    if not per_question:
        raise DomainError("no questions")
    filled: dict[str, float] = {}
    for qid, value in per_question.items():
        if value is None:
            if not zero_fill:
                raise DomainError(f"question {qid!r} has no correct solutions")
            filled[qid] = 0.0
        else:
            filled[qid] = float(value)
    aggregate = sum(filled.values()) / len(filled)
    return ModelDivergence(model_id=model_id, per_question=filled, aggregate=aggregate)
