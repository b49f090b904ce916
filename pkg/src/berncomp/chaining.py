"""Covering numbers, entropy numbers, admissible partition sequences,
chaining functionals and the entropy-based composite-complexity bound.

Entropy numbers here restrict centers to subsets of the space itself (some
texts allow external centers; exact values can differ by a factor of at
most 2).  Center selections are farthest-first with ties broken by lowest
index, so everything is deterministic.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import FiniteMetricSpace
from .errors import InvalidInputError

ENTROPY_SOURCES = ("empirical-greedy", "exhaustive", "lipschitz-formula")

# Levels beyond this are never needed: their admissible cardinality exceeds
# any finite space we can represent.
MAX_LEVEL = 20


def admissible_capacity(m: int):
    """Largest admissible cardinality at level m: 1 at level 0, else 2^(2^m).
    Returns None when the value exceeds any practical set size."""
    if m < 0:
        raise InvalidInputError("level must be nonnegative")
    if m == 0:
        return 1
    if 2 ** m > 60:
        return None
    return 2 ** (2 ** m)


def farthest_first_order(dist: np.ndarray, indices=None) -> list:
    """Greedy farthest-first ordering of the given indices (default: all).

    Starts from the lowest index; each subsequent pick maximizes the minimum
    distance to the points already chosen, ties broken by lowest index.
    """
    if indices is None:
        indices = np.arange(dist.shape[0])
    idx = np.asarray(sorted(indices), dtype=int)
    if idx.size == 0:
        raise InvalidInputError("need at least one point")
    order = [int(idx[0])]
    if idx.size == 1:
        return order
    remaining = list(idx[1:])
    mindist = dist[np.asarray(remaining), order[0]].astype(float)
    while remaining:
        pos = int(np.argmax(mindist))  # first maximum = lowest index
        chosen = remaining.pop(pos)
        order.append(int(chosen))
        mindist = np.delete(mindist, pos)
        if remaining:
            np.minimum(mindist, dist[np.asarray(remaining), chosen], out=mindist)
    return order


@dataclass(frozen=True)
class CoveringResult:
    upper_bound: int
    exact: int | None


def covering_number(space: FiniteMetricSpace, delta: float,
                    search_budget: int = 1_000_000) -> CoveringResult:
    """Minimum number of closed delta-balls centered at space points needed
    to cover the space.

    The greedy farthest-first construction gives the upper bound.  The exact
    minimum set cover is searched whenever the enumeration fits the budget,
    which is guaranteed for spaces of at most 20 points.
    """
    if delta <= 0:
        raise InvalidInputError("delta must be positive")
    m = space.size
    d = space.dist
    order = farthest_first_order(d)
    covered = np.full(m, np.inf)
    upper = 0
    for center in order:
        if upper > 0 and covered.max() <= delta:
            break
        np.minimum(covered, d[:, center], out=covered)
        upper += 1
    if covered.max() > delta:  # only possible if loop exhausted all points
        upper = m

    ball = d <= delta  # ball[i, j]: point i covered by a ball centered at j
    always_exact = m <= 20
    total = 0
    for size in range(1, upper):
        count = math.comb(m, size)
        if not always_exact and total + count > search_budget:
            return CoveringResult(upper, None)
        total += count
        if _exists_cover(ball, size):
            return CoveringResult(upper, size)
    return CoveringResult(upper, upper)


def _exists_cover(ball: np.ndarray, size: int, chunk: int = 8192) -> bool:
    m = ball.shape[0]
    combos = itertools.combinations(range(m), size)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return False
        subsets = np.array(block, dtype=int)  # (chunk, size)
        covered = ball[:, subsets].any(axis=2)  # (m, chunk)
        if covered.all(axis=0).any():
            return True


@dataclass(frozen=True)
class EntropyResult:
    upper_bound: float
    exact: float | None


def entropy_number(space: FiniteMetricSpace, m: int,
                   search_budget: int = 1_000_000) -> EntropyResult:
    """Level-m entropy number: the best worst-case distance from any point
    to a center subset of the space of admissible cardinality (1 at level 0,
    2^(2^m) beyond).

    Farthest-first centers give the upper bound; subsets are enumerated for
    the exact value when their count fits the budget.  Zero (exactly) once
    the capacity reaches the point count.
    """
    cap = admissible_capacity(m)
    npts = space.size
    size = npts if cap is None else min(cap, npts)
    if size >= npts:
        return EntropyResult(0.0, 0.0)
    d = space.dist
    centers = farthest_first_order(d)[:size]
    upper = float(d[:, centers].min(axis=1).max())
    if math.comb(npts, size) > search_budget:
        return EntropyResult(upper, None)
    best = upper
    combos = itertools.combinations(range(npts), size)
    while True:
        block = list(itertools.islice(combos, 4096))
        if not block:
            break
        subsets = np.array(block, dtype=int)
        radius = d[:, subsets].min(axis=2).max(axis=0)  # (chunk,)
        candidate = float(radius.min())
        if candidate < best:
            best = candidate
    return EntropyResult(upper, best)


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy numbers e_0 >= e_1 >= ... with their provenance tag."""

    values: tuple
    source: str

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise InvalidInputError("entropy profile must be nonempty")
        if any(v < 0 for v in vals):
            raise InvalidInputError("entropy numbers are nonnegative")
        for a, b in zip(vals, vals[1:]):
            if b > a + 1e-12:
                raise InvalidInputError("entropy numbers must be nonincreasing")
        if self.source not in ENTROPY_SOURCES:
            raise InvalidInputError(f"unknown source {self.source!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


def entropy_profile(space: FiniteMetricSpace, max_m: int | None = None,
                    prefer_exact: bool = True,
                    search_budget: int = 1_000_000) -> EntropyProfile:
    """Profile of entropy numbers of a space, up to the first zero level (or
    max_m).  Uses exact values when every level admits the exhaustive
    search, greedy upper bounds otherwise."""
    results = []
    m = 0
    while True:
        res = entropy_number(space, m, search_budget)
        results.append(res)
        if res.upper_bound == 0.0:
            break
        if max_m is not None and m >= max_m:
            break
        m += 1
    if prefer_exact and all(r.exact is not None for r in results):
        return EntropyProfile(tuple(r.exact for r in results), "exhaustive")
    return EntropyProfile(tuple(r.upper_bound for r in results), "empirical-greedy")


def uniform_metric_space(table: np.ndarray, labels=None) -> FiniteMetricSpace:
    """Metric space of tabulated functions under the uniform metric over the
    tabulation points: d(f, g) = max_i |f(x_i) - g(x_i)|.

    This realizes the uniform metric of a function class restricted to a
    caller-supplied finite evaluation set; reports built on it should flag
    that the evaluation set is a surrogate.
    """
    t = np.asarray(table, dtype=float)
    if t.ndim != 2:
        raise InvalidInputError("table must be 2-d (functions by points)")
    dist = np.abs(t[:, None, :] - t[None, :, :]).max(axis=2)
    dist = (dist + dist.T) / 2.0
    np.fill_diagonal(dist, 0.0)
    if labels is None:
        labels = tuple(str(j) for j in range(t.shape[0]))
    return FiniteMetricSpace(labels=tuple(labels), dist=dist)


def lipschitz_entropy_formula(m: int, L: float, B: float, k: int, C_k: float) -> float:
    """Entropy-number envelope C_k * L * B * 2^(-m/k) for an L-Lipschitz
    class that is L*B-bounded on a k-dimensional domain of scale B."""
    if m < 0 or L <= 0 or B <= 0 or k < 1 or C_k <= 0:
        raise InvalidInputError("parameters must be positive (m nonnegative)")
    return float(C_k * L * B * 2.0 ** (-m / k))


def lipschitz_entropy_profile(max_m: int, L: float, B: float, k: int,
                              C_k: float) -> EntropyProfile:
    values = tuple(lipschitz_entropy_formula(m, L, B, k, C_k) for m in range(max_m + 1))
    return EntropyProfile(values, "lipschitz-formula")


# ---------------------------------------------------------------------------
# Admissible sequences and chaining functionals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleSequence:
    """Nested partitions of {0, ..., n-1}: one block at level 0 and at most
    2^(2^m) blocks at level m, every block contained in a level-(m-1) block."""

    levels: tuple  # tuple of levels; each level is a tuple of index tuples

    def __post_init__(self):
        levels = tuple(
            tuple(tuple(int(i) for i in block) for block in level)
            for level in self.levels
        )
        if not levels:
            raise InvalidInputError("sequence needs at least one level")
        object.__setattr__(self, "levels", levels)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    def validate(self, n_points: int) -> None:
        universe = frozenset(range(n_points))
        for m, level in enumerate(self.levels):
            cap = admissible_capacity(m)
            if cap is not None and len(level) > cap:
                raise InvalidInputError(
                    f"level {m} has {len(level)} blocks, cap is {cap}"
                )
            seen = []
            for block in level:
                if not block:
                    raise InvalidInputError(f"level {m} contains an empty block")
                seen.extend(block)
            if len(seen) != n_points or set(seen) != universe:
                raise InvalidInputError(f"level {m} is not a partition of the space")
        for m in range(len(self.levels) - 1):
            parents = [frozenset(b) for b in self.levels[m]]
            for block in self.levels[m + 1]:
                b = frozenset(block)
                if not any(b <= p for p in parents):
                    raise InvalidInputError(
                        f"level {m + 1} block {sorted(block)} is not nested in level {m}"
                    )

    def block_of(self, m: int, point: int) -> tuple:
        for block in self.levels[m]:
            if point in block:
                return block
        raise InvalidInputError(f"point {point} missing from level {m}")


def build_admissible_sequence(space: FiniteMetricSpace,
                              max_level: int = MAX_LEVEL) -> AdmissibleSequence:
    """Recursive farthest-first splitting: level m refines level m-1 by
    partitioning each block around up to cap(m)/|level m-1| farthest-first
    centers; nesting is preserved by construction.  Stops once all blocks
    are singletons (or at max_level)."""
    npts = space.size
    d = space.dist
    levels = [(tuple(range(npts)),)]
    m = 0
    while m < max_level and any(len(b) > 1 for b in levels[-1]):
        m += 1
        cap = admissible_capacity(m)
        prev = levels[-1]
        allowance = npts if cap is None else max(1, cap // len(prev))
        new_level = []
        for block in prev:
            if len(block) == 1 or allowance == 1:
                new_level.append(block)
                continue
            n_centers = min(allowance, len(block))
            block_arr = np.asarray(block, dtype=int)
            sub = d[np.ix_(block_arr, block_arr)]
            if sub.max() == 0.0:
                # coincident points carry no metric signal; split by index
                for chunk in np.array_split(block_arr, n_centers):
                    if chunk.size:
                        new_level.append(tuple(int(i) for i in chunk))
                continue
            local_centers = farthest_first_order(sub)[:n_centers]
            assign = np.argmin(sub[:, local_centers], axis=1)  # ties: lowest center
            for ci in range(len(local_centers)):
                members = block_arr[assign == ci]
                if members.size:
                    new_level.append(tuple(int(i) for i in members))
        levels.append(tuple(new_level))
    return AdmissibleSequence(tuple(levels))


def gamma2_upper(space: FiniteMetricSpace, seq: AdmissibleSequence) -> float:
    """Chaining functional of the given admissible sequence: the worst point
    total of 2^(m/2) times the diameter of its level-m block.

    An upper bound on the optimal (gamma-2) value; exact for the sequence
    when its final level is all singletons (levels past the last provided
    contribute zero diameter), which build_admissible_sequence guarantees
    for spaces of distinct points.
    """
    seq.validate(space.size)
    d = space.dist
    totals = np.zeros(space.size)
    for m, level in enumerate(seq.levels):
        weight = 2.0 ** (m / 2.0)
        for block in level:
            if len(block) == 1:
                continue
            idx = np.asarray(block, dtype=int)
            diam = float(d[np.ix_(idx, idx)].max())
            totals[idx] += weight * diam
    return float(totals.max())


def chaining_expectation_bound(gamma2_value: float, diameter: float,
                               kappa: float, c_univ: float = 1.0) -> float:
    """Expected-supremum bound for a process with subgaussian increments and
    tail inflation kappa: c_univ * (gamma2 + diameter * sqrt(log kappa))."""
    if kappa < 1:
        raise InvalidInputError("kappa must be at least 1")
    if gamma2_value < 0 or diameter < 0 or c_univ <= 0:
        raise InvalidInputError("gamma2, diameter must be nonnegative; c_univ positive")
    return float(c_univ * (gamma2_value + diameter * math.sqrt(math.log(kappa))))


def composite_entropy_bound(n: int, L: float, bT: float, profile: EntropyProfile,
                            c1: float = 1.0):
    """Entropy-number bound on the composite complexity:

        c1 * L * bT + n * min over M of [e_M + sum_{m<=M} 2^(m/2) e_m / sqrt(n)]

    Returns (bound, minimizing M); the scan over M is exhaustive over the
    profile, so the reported minimum is exact for the given values.
    """
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    vals = profile.values
    sqrt_n = math.sqrt(n)
    running = 0.0
    best_val = math.inf
    best_m = 0
    for M, e in enumerate(vals):
        running += (2.0 ** (M / 2.0)) * e / sqrt_n
        inner = e + running
        if inner < best_val:
            best_val = inner
            best_m = M
    return float(c1 * L * bT + n * best_val), best_m


def truncation_objective(M: int, k: int, n: int) -> float:
    """Normalized entropy-sum objective at truncation level M for a class
    with entropy envelope 2^(-m/k) on an n-point sample:

        2^(-M/k) + (1/sqrt(n)) * sum_{m=0}^{M} 2^(m(1/2 - 1/k))
    """
    if M < 0 or k < 1 or n < 1:
        raise InvalidInputError("need M >= 0, k >= 1, n >= 1")
    ms = np.arange(M + 1)
    tail = float(np.power(2.0, ms * (0.5 - 1.0 / k)).sum()) / math.sqrt(n)
    return float(2.0 ** (-M / k) + tail)


def min_truncation_objective(k: int, n: int, max_m: int = 64):
    """Exhaustive scan of the truncation objective; returns (minimum, argmin)."""
    best_val = math.inf
    best_m = 0
    for M in range(max_m + 1):
        v = truncation_objective(M, k, n)
        if v < best_val:
            best_val = v
            best_m = M
    return best_val, best_m


def composite_rate(n: int, k: int) -> float:
    """Per-sample residual rate of the entropy-based composite bound:
    n^(-1/2) for k = 1, n^(-1/2) log n for k = 2, n^(-1/k) for k > 2
    (natural logarithm)."""
    if n < 1 or k < 1:
        raise InvalidInputError("need n >= 1, k >= 1")
    if k == 1:
        return n ** -0.5
    if k == 2:
        return math.log(n) * n ** -0.5
    return n ** (-1.0 / k)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def entropy_profile_to_csv(profile: EntropyProfile, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "e_m", "source"])
        for m, v in enumerate(profile.values):
            writer.writerow([str(m), repr(v), profile.source])


def entropy_profile_from_csv(path) -> EntropyProfile:
    values = []
    source = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["m", "e_m", "source"]:
            raise InvalidInputError("unexpected entropy-profile header")
        for row in reader:
            if not row:
                continue
            values.append(float(row[1]))
            source = row[2]
    if source is None:
        raise InvalidInputError("entropy-profile CSV has no rows")
    return EntropyProfile(tuple(values), source)


def sequence_to_text(seq: AdmissibleSequence, path) -> None:
    """One line per level: 'level m: {i,j,...} {k,...}'."""
    with open(path, "w") as fh:
        for m, level in enumerate(seq.levels):
            blocks = " ".join("{" + ",".join(str(i) for i in block) + "}" for block in level)
            fh.write(f"level {m}: {blocks}\n")


def sequence_from_text(path) -> AdmissibleSequence:
    levels = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            _, _, rest = line.partition(":")
            blocks = []
            for token in rest.split():
                token = token.strip()
                if not (token.startswith("{") and token.endswith("}")):
                    raise InvalidInputError(f"malformed block token {token!r}")
                blocks.append(tuple(int(v) for v in token[1:-1].split(",") if v))
            levels.append(tuple(blocks))
    return AdmissibleSequence(tuple(levels))
