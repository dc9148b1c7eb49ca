"""Monotone lattice-path maze task: generation, parsing, verification, oracles.

A maze instance lives on the integer lattice 0..grid_max (inclusive) with a
fixed start at (0,0), a target point, and a set of blocked cells.  A solution
is a sequence of unit moves right (``r``) or up (``u``) written in the surface
syntax ``s→r→u→…→e``; a boxed ``×`` claims that no viable path exists.  Exact
counting, exhaustive enumeration, and uniform sampling of viable paths are
provided as oracles for each other.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass

from .errors import DomainError, EnumerationLimitError

__all__ = [
    "MazeSpec",
    "MazePath",
    "MazeVerdict",
    "FailureReason",
    "NO_PATH_SENTINEL",
    "generate_maze",
    "parse_path",
    "render_path",
    "verify_path",
    "count_paths",
    "enumerate_paths",
    "sample_paths",
]

NO_PATH_SENTINEL = "×"
_NO_PATH_TOKENS = {"×", "⊠", r"\times"}  # a bare ascii x stays malformed
_ARROW = re.compile(r"→|->")
_BOXED = re.compile(r"\\boxed\s*\{(.*)\}\s*$", re.DOTALL)


class FailureReason(enum.Enum):
    NONE = "none"
    WRONG_ENDPOINT = "wrong_endpoint"
    BLOCKED_CELL = "blocked_cell"
    OUT_OF_BOUNDS = "out_of_bounds"
    MALFORMED = "malformed"
    WRONG_NO_PATH_CLAIM = "wrong_no_path_claim"


@dataclass(frozen=True)
class MazeSpec:
    """One maze instance; start is always (0,0)."""

    target: tuple[int, int]
    blocked: frozenset[tuple[int, int]] = frozenset()
    grid_max: int = 10
    seed: int = 0
    start: tuple[int, int] = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "blocked", frozenset(tuple(p) for p in self.blocked))
        if self.grid_max < 1:
            raise DomainError("grid_max must be at least 1")
        if self.start != (0, 0):
            raise DomainError("start is fixed at (0,0)")
        if not self._in_bounds(self.target):
            raise DomainError(f"target {self.target} out of bounds")
        if self.target == self.start:
            raise DomainError("target must differ from start")
        if self.start in self.blocked or self.target in self.blocked:
            raise DomainError("blocked cells may not include start or target")
        if len(self.blocked) >= (self.grid_max + 1) ** 2:
            raise DomainError("too many blocked cells")
        for p in self.blocked:
            if not self._in_bounds(p):
                raise DomainError(f"blocked cell {p} out of bounds")

    def _in_bounds(self, p: tuple[int, int]) -> bool:
        return 0 <= p[0] <= self.grid_max and 0 <= p[1] <= self.grid_max


@dataclass(frozen=True)
class MazePath:
    """A claimed solution: a move string over {r, u}, or a no-path claim."""

    moves: str = ""
    claims_no_path: bool = False
    malformed: bool = False

    def __post_init__(self):
        if self.claims_no_path and self.moves:
            raise DomainError("a no-path claim carries no moves")
        if not self.malformed and any(c not in "ru" for c in self.moves):
            raise DomainError(f"illegal move in {self.moves!r}")


@dataclass(frozen=True)
class MazeVerdict:
    valid: bool
    failure_reason: FailureReason = FailureReason.NONE

    def __post_init__(self):
        if self.valid and self.failure_reason is not FailureReason.NONE:
            raise DomainError("valid verdicts carry reason NONE")


_MALFORMED = MazePath(malformed=True)


def generate_maze(
    block_count: int,
    grid_max: int = 10,
    require_solvable: bool = True,
    seed: int = 0,
    max_attempts: int = 1000,
) -> MazeSpec:
    """Sample a maze instance, deterministic per seed.

    The target is drawn uniformly from all non-start points, then
    ``block_count`` blocked cells uniformly without replacement from the
    remaining points.  With ``require_solvable`` the instance is redrawn
    until at least one viable path exists.
    """
    cells = (grid_max + 1) ** 2
    if block_count < 0 or block_count >= cells - 2:
        raise DomainError(
            f"unsatisfiable config: block_count must lie in [0, {cells - 2})"
        )
    rng = random.Random(seed)
    points = [(x, y) for x in range(grid_max + 1) for y in range(grid_max + 1)]
    candidates = [p for p in points if p != (0, 0)]
    for _ in range(max_attempts):
        target = rng.choice(candidates)
        pool = [p for p in points if p != (0, 0) and p != target]
        blocked = frozenset(rng.sample(pool, block_count))
        spec = MazeSpec(target=target, blocked=blocked, grid_max=grid_max, seed=seed)
        if not require_solvable or count_paths(spec) >= 1:
            return spec
    raise DomainError(f"unsatisfiable config: no solvable instance in {max_attempts} attempts")


def parse_path(text: str) -> MazePath:
    """Parse the surface syntax into a path; never raises on bad input.

    Accepts ``s→r→u→…→e`` chains (ASCII ``->`` arrows too), optionally inside
    ``$…$`` and/or ``\\boxed{…}`` markup, and the boxed ``×`` no-path claim.
    Anything else yields a malformed path, which verifies as MALFORMED.
    """
    body = text.strip()
    if body.startswith("$") and body.endswith("$") and len(body) >= 2:
        body = body[1:-1].strip()
    boxed = _BOXED.match(body)
    if boxed:
        body = boxed.group(1).strip()
    if body in _NO_PATH_TOKENS:
        return MazePath(claims_no_path=True)
    tokens = [t.strip() for t in _ARROW.split(body)]
    if len(tokens) < 2 or tokens[0] != "s" or tokens[-1] != "e":
        return _MALFORMED
    moves = tokens[1:-1]
    if any(m not in ("r", "u") for m in moves):
        return _MALFORMED
    return MazePath(moves="".join(moves))


def render_path(path: MazePath) -> str:
    """Inverse of parse_path for well-formed paths."""
    if path.malformed:
        raise DomainError("cannot render a malformed path")
    if path.claims_no_path:
        return NO_PATH_SENTINEL
    return "→".join(["s", *path.moves, "e"])


def verify_path(spec: MazeSpec, path: MazePath) -> MazeVerdict:
    """Walk the claimed moves from (0,0) and judge them against the maze.

    A position counts as visited when a move lands on it; the start itself is
    never blocked by construction.  A no-path claim is valid exactly when the
    maze truly has no viable path.
    """
    if path.malformed:
        return MazeVerdict(False, FailureReason.MALFORMED)
    if path.claims_no_path:
        if count_paths(spec) == 0:
            return MazeVerdict(True)
        return MazeVerdict(False, FailureReason.WRONG_NO_PATH_CLAIM)
    x, y = spec.start
    for move in path.moves:
        if move == "r":
            x += 1
        else:
            y += 1
        if x > spec.grid_max or y > spec.grid_max:
            return MazeVerdict(False, FailureReason.OUT_OF_BOUNDS)
        if (x, y) in spec.blocked:
            return MazeVerdict(False, FailureReason.BLOCKED_CELL)
    if (x, y) != spec.target:
        return MazeVerdict(False, FailureReason.WRONG_ENDPOINT)
    return MazeVerdict(True)


def count_paths(spec: MazeSpec) -> int:
    """Exact number of viable monotone paths, by dynamic programming.

    Pascal-style table over the rectangle spanned by start and target;
    blocked cells contribute zero ways.  Exact integer arithmetic.
    """
    tx, ty = spec.target
    ways = [[0] * (ty + 1) for _ in range(tx + 1)]
    ways[0][0] = 1
    for x in range(tx + 1):
        for y in range(ty + 1):
            if (x, y) in spec.blocked:
                ways[x][y] = 0
                continue
            if x > 0:
                ways[x][y] += ways[x - 1][y]
            if y > 0:
                ways[x][y] += ways[x][y - 1]
    return ways[tx][ty]


def enumerate_paths(spec: MazeSpec, limit: int = 100_000) -> list[MazePath]:
    """All viable paths by depth-first search, in lexicographic order (r < u).

    Deliberately independent of the counting table: the search only prunes on
    bounds and blocked cells, so enumeration and count check each other.
    Refuses to run when the exact count exceeds ``limit``.
    """
    total = count_paths(spec)
    if total > limit:
        raise EnumerationLimitError(total, limit)
    tx, ty = spec.target
    blocked = spec.blocked
    out: list[MazePath] = []
    buf: list[str] = []

    def walk(x: int, y: int) -> None:
        if (x, y) == (tx, ty):
            out.append(MazePath(moves="".join(buf)))
            return
        if x < tx and (x + 1, y) not in blocked:
            buf.append("r")
            walk(x + 1, y)
            buf.pop()
        if y < ty and (x, y + 1) not in blocked:
            buf.append("u")
            walk(x, y + 1)
            buf.pop()

    walk(0, 0)
    return out


def _suffix_counts(spec: MazeSpec) -> list[list[int]]:
    """ways[x][y] = number of viable paths from (x,y) to the target."""
    tx, ty = spec.target
    ways = [[0] * (ty + 1) for _ in range(tx + 1)]
    for x in range(tx, -1, -1):
        for y in range(ty, -1, -1):
            if (x, y) in spec.blocked:
                continue
            if (x, y) == (tx, ty):
                ways[x][y] = 1
                continue
            if x < tx:
                ways[x][y] += ways[x + 1][y]
            if y < ty:
                ways[x][y] += ways[x][y + 1]
    return ways


def _unrank(spec: MazeSpec, index: int, ways: list[list[int]]) -> MazePath:
    """The index-th viable path in lexicographic order, via weighted descent."""
    tx, ty = spec.target
    x, y = 0, 0
    moves: list[str] = []
    while (x, y) != (tx, ty):
        via_right = ways[x + 1][y] if x < tx else 0
        if index < via_right:
            moves.append("r")
            x += 1
        else:
            index -= via_right
            moves.append("u")
            y += 1
    return MazePath(moves="".join(moves))


def sample_paths(spec: MazeSpec, n: int, seed: int = 0) -> list[MazePath]:
    """Uniformly sample ``n`` viable paths, deterministic per seed.

    Without replacement when the maze has at least ``n`` distinct paths,
    with replacement otherwise.  Uniformity comes from drawing a uniform
    path rank and descending the counting table.
    """
    if n < 1:
        raise DomainError("need n >= 1 samples")
    total = count_paths(spec)
    if total == 0:
        raise DomainError("maze has no viable path")
    rng = random.Random(seed)
    if total >= n:
        indices = rng.sample(range(total), n)
    else:
        indices = [rng.randrange(total) for _ in range(n)]
    ways = _suffix_counts(spec)
    return [_unrank(spec, i, ways) for i in indices]
