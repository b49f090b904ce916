"""Exact and Monte Carlo estimators for Rademacher (Bernoulli) and Gaussian
complexities of point sets and of composite function classes.

Two sign conventions coexist and are never mixed:

* matrix form: a set of k-by-n matrices is weighted with k*n independent
  random signs (or Gaussians), one per entry;
* composite form: a class applied to the n columns of an element is weighted
  with n independent signs, one per column.

Each operation documents which convention it uses.  All randomized
operations are pure functions of (inputs, seed): the same seed gives a
bit-identical result.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .classes import FiniteFunctionClass, FunctionClassOracle, _as_points
from .core import ComplexityEstimate, PointSet
from .errors import BudgetExceededError, DegenerateSetError, InvalidInputError

# Ordered pairs closer than this (Frobenius) are skipped as degenerate: the
# increment ratio is undefined at coincident pairs.
DEGENERATE_PAIR_TOL = 1e-12


@dataclass(frozen=True)
class EstimatorConfig:
    """Estimator mode and budgets.

    mode "auto" selects exact enumeration iff the number of independent
    signs is at most exact_cutoff_n (2^cutoff patterns); the default 14
    keeps a single estimate under 16384 patterns.
    """

    mode: str = "auto"
    mc_samples: int = 20000
    seed: int = 42
    exact_cutoff_n: int = 14

    def __post_init__(self):
        if self.mode not in ("auto", "exact", "monte-carlo"):
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if self.mc_samples < 1 or self.exact_cutoff_n < 1:
            raise InvalidInputError("mc_samples and exact_cutoff_n must be positive")

    def with_seed(self, seed: int) -> "EstimatorConfig":
        return replace(self, seed=int(seed))

    def pick_exact(self, n_signs: int) -> bool:
        if self.mode == "exact":
            if n_signs > self.exact_cutoff_n:
                raise BudgetExceededError(
                    f"exact enumeration over {n_signs} signs exceeds the cutoff "
                    f"{self.exact_cutoff_n} (2^{n_signs} patterns)"
                )
            return True
        if self.mode == "monte-carlo":
            return False
        return n_signs <= self.exact_cutoff_n


DEFAULT_CONFIG = EstimatorConfig()


def sign_patterns(n_signs: int) -> np.ndarray:
    """All 2^n sign patterns as a (2^n, n) array of +-1 floats."""
    if n_signs < 1:
        raise InvalidInputError("need at least one sign")
    idx = np.arange(2 ** n_signs, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n_signs)) & 1
    return bits.astype(float) * 2.0 - 1.0


def _mc_signs(rng: np.random.Generator, samples: int, width: int) -> np.ndarray:
    return rng.integers(0, 2, size=(samples, width)).astype(float) * 2.0 - 1.0


def _finish(sups: np.ndarray, exact: bool, samples: int, seed: int) -> ComplexityEstimate:
    value = float(np.mean(sups))
    if exact:
        return ComplexityEstimate(value, 0.0, "exact-enumeration", samples, seed)
    se = float(np.std(sups, ddof=1) / np.sqrt(len(sups))) if len(sups) > 1 else 0.0
    return ComplexityEstimate(value, se, "monte-carlo", samples, seed)


def _linear_sup_estimate(vecs: np.ndarray, cfg: EstimatorConfig, gaussian: bool) -> ComplexityEstimate:
    """E sup over rows of <weights, row> with independent entrywise weights."""
    m, width = vecs.shape
    if m == 1:
        # E <weights, t> = 0 for a singleton; exact regardless of mode.
        return ComplexityEstimate(0.0, 0.0, "closed-form", 0, cfg.seed)
    if gaussian:
        rng = np.random.default_rng(cfg.seed)
        draws = rng.standard_normal((cfg.mc_samples, width))
        sups = (draws @ vecs.T).max(axis=1)
        return _finish(sups, False, cfg.mc_samples, cfg.seed)
    if cfg.pick_exact(width):
        pats = sign_patterns(width)
        sups = (pats @ vecs.T).max(axis=1)
        return _finish(sups, True, len(pats), cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    sups = (_mc_signs(rng, cfg.mc_samples, width) @ vecs.T).max(axis=1)
    return _finish(sups, False, cfg.mc_samples, cfg.seed)


def bernoulli_complexity(T: PointSet, cfg: EstimatorConfig | None = None) -> ComplexityEstimate:
    """E sup over elements t of the sign-weighted entry sum, matrix form
    (k*n independent signs).

    Exact mode enumerates all 2^(k*n) sign patterns; Monte Carlo reports the
    sample mean with std_error = sample std / sqrt(samples).
    """
    cfg = cfg or DEFAULT_CONFIG
    return _linear_sup_estimate(T.vectorized(), cfg, gaussian=False)


def gaussian_complexity(T: PointSet, cfg: EstimatorConfig | None = None) -> ComplexityEstimate:
    """E sup over elements of the Gaussian-weighted entry sum, matrix form.

    Monte Carlo only (no finite enumeration exists); singletons return the
    closed form 0.
    """
    cfg = cfg or DEFAULT_CONFIG
    return _linear_sup_estimate(T.vectorized(), cfg, gaussian=True)


def _composite_sups(oracle: FunctionClassOracle, T: PointSet, weights: np.ndarray) -> np.ndarray:
    per_element = np.empty((T.n_elements, weights.shape[0]))
    for i in range(T.n_elements):
        pts = T.element(i).T  # columns of the element as (n, k) points
        per_element[i] = oracle.sup_batch(pts, weights)
    return per_element.max(axis=0)


def composite_bernoulli_complexity(oracle: FunctionClassOracle, T: PointSet,
                                   cfg: EstimatorConfig | None = None) -> ComplexityEstimate:
    """E sup over elements t and class members f of sum_i eps_i f(t_i),
    composite form (n independent signs, one per column).

    The supremum couples f and t jointly, per sign pattern (exact) or per
    sample (Monte Carlo).
    """
    cfg = cfg or DEFAULT_CONFIG
    n = T.n
    if cfg.pick_exact(n):
        pats = sign_patterns(n)
        sups = _composite_sups(oracle, T, pats)
        return _finish(sups, True, len(pats), cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    signs = _mc_signs(rng, cfg.mc_samples, n)
    sups = _composite_sups(oracle, T, signs)
    return _finish(sups, False, cfg.mc_samples, cfg.seed)


def empirical_rademacher(cls_or_oracle, cfg: EstimatorConfig | None = None,
                         points=None) -> ComplexityEstimate:
    """Normalized empirical Rademacher complexity over a fixed sample:
    (1/n) E sup over the class of the sign-weighted value sum (n signs).

    Accepts a FiniteFunctionClass tabulated on the sample, or a
    FunctionClassOracle together with the (n, k) sample points.
    """
    cfg = cfg or DEFAULT_CONFIG
    if isinstance(cls_or_oracle, FiniteFunctionClass):
        if points is not None:
            raise InvalidInputError("a tabulated class already fixes its sample")
        oracle = cls_or_oracle.as_oracle()
        pts = None
        n = cls_or_oracle.n_points
    else:
        if points is None:
            raise InvalidInputError("an oracle needs the sample points")
        oracle = cls_or_oracle
        pts = _as_points(points)
        n = pts.shape[0]
    if cfg.pick_exact(n):
        weights = sign_patterns(n)
        exact = True
        samples = len(weights)
    else:
        rng = np.random.default_rng(cfg.seed)
        weights = _mc_signs(rng, cfg.mc_samples, n)
        exact = False
        samples = cfg.mc_samples
    sups = oracle.sup_batch(pts, weights)
    est = _finish(sups / n, exact, samples, cfg.seed)
    return est


def increment_ratio(oracle: FunctionClassOracle, S: PointSet,
                    cfg: EstimatorConfig | None = None) -> float:
    """Worst pairwise ratio of the expected supremum of the sign-weighted
    increment sum_i eps_i (f(s_i) - f(t_i)) to the Frobenius distance
    ||s - t|| (n signs, one per column).

    Pairs closer than DEGENERATE_PAIR_TOL are skipped; if every pair is
    degenerate a DegenerateSetError is raised.  The same sign draws are used
    for every pair (common random numbers) to reduce ratio variance.
    """
    cfg = cfg or DEFAULT_CONFIG
    if S.n_elements < 2:
        raise InvalidInputError("need at least two elements")
    n = S.n
    if cfg.pick_exact(n):
        signs = sign_patterns(n)
    else:
        rng = np.random.default_rng(cfg.seed)
        signs = _mc_signs(rng, cfg.mc_samples, n)
    half = np.concatenate([signs, -signs], axis=1)  # coefficients (eps, -eps)
    best = None
    vecs = S.vectorized()
    # Sign symmetry eps -> -eps makes the (s, t) and (t, s) expectations
    # equal, so unordered pairs suffice.
    for i in range(S.n_elements):
        for j in range(i + 1, S.n_elements):
            dist = float(np.linalg.norm(vecs[i] - vecs[j]))
            if dist < DEGENERATE_PAIR_TOL:
                continue
            pts = np.concatenate([S.element(i).T, S.element(j).T], axis=0)
            mean = float(np.mean(oracle.sup_batch(pts, half)))
            ratio = mean / dist
            if best is None or ratio > best:
                best = ratio
    if best is None:
        raise DegenerateSetError("all element pairs coincide within tolerance")
    return best
