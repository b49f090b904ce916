"""Function-class abstractions with exact supremum oracles.

Every complexity computation reduces to evaluating, for coefficient vectors
c, the supremum of sum_i c_i f(x_i) over a class of functions.  Three
concrete classes are provided:

* FiniteFunctionClass: tabulated values, supremum by row-wise maximization.
* Lipschitz balls {f : L-Lipschitz, |f| <= L*R}: the supremum equals the
  maximum of sum_i c_i y_i over value vectors y with |y_i - y_j| <=
  L*||x_i - x_j|| and |y_i| <= L*R, because any feasible y extends to an
  L-Lipschitz function (McShane extension) and truncation at +-L*R
  preserves both constraints.  This is a linear program; a dense simplex
  handles every ambient dimension k, and for k = 1 an exact path solver
  scales to larger point counts.
* Gaussian-kernel RKHS balls of radius rho: Riesz representation gives the
  closed form rho * sqrt(c' G c) with G the kernel Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidInputError
from .simplex import simplex_maximize

# Largest point count accepted by the dense all-pairs simplex oracle.
SIMPLEX_MAX_POINTS = 64

# Gram quadratic forms below this are treated as rounding noise and clamped
# to zero; anything more negative indicates a broken Gram matrix.
GRAM_NEGATIVE_TOL = -1e-12


def _as_points(points) -> np.ndarray:
    """Normalize points to an (n, k) array; accepts (n,) for k = 1."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise InvalidInputError("points must be an (n, k) array with n >= 1")
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points must be finite")
    return pts


def _as_coeffs(c, n: int) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise InvalidInputError(f"expected {n} coefficients, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidInputError("coefficients must be finite")
    return c


class FunctionClassOracle:
    """Capability bundle for a function class.

    Carries a uniform Lipschitz constant, a uniform bound, an exact supremum
    oracle for linear functionals c -> sup_f sum_i c_i f(x_i) and an optional
    pointwise evaluator for finite classes.  The oracle is convex in c but is
    not assumed positively homogeneous (the class need not be a cone).
    """

    def __init__(self, lipschitz_L: float, uniform_bound_B: float, sup_fn,
                 sup_batch_fn=None, eval_fn=None):
        if lipschitz_L <= 0 or uniform_bound_B <= 0:
            raise InvalidInputError("lipschitz_L and uniform_bound_B must be positive")
        self.lipschitz_L = float(lipschitz_L)
        self.uniform_bound_B = float(uniform_bound_B)
        self._sup = sup_fn
        self._sup_batch = sup_batch_fn
        self._eval = eval_fn

    def sup(self, points, c) -> float:
        return float(self._sup(points, c))

    def sup_batch(self, points, C) -> np.ndarray:
        """Oracle values for every row of C; falls back to a loop."""
        C = np.atleast_2d(np.asarray(C, dtype=float))
        if self._sup_batch is not None:
            return np.asarray(self._sup_batch(points, C), dtype=float)
        return np.array([self._sup(points, row) for row in C], dtype=float)

    def eval(self, fid, x) -> float:
        if self._eval is None:
            raise InvalidInputError("this oracle has no pointwise evaluator")
        return float(self._eval(fid, x))


@dataclass(frozen=True)
class FiniteFunctionClass:
    """r functions tabulated on a fixed list of n points.

    table[j, i] = f_j(x_i).  When the points are supplied the tabulated
    Lipschitz certificate |f_j(x_i) - f_j(x_i')| <= L ||x_i - x_i'|| is
    verified at construction, as is the uniform bound.
    """

    table: np.ndarray
    lipschitz_L: float
    uniform_bound_B: float
    points: np.ndarray | None = None

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
            raise InvalidInputError("table must be a nonempty 2-d array")
        if not np.all(np.isfinite(table)):
            raise InvalidInputError("table entries must be finite")
        if self.lipschitz_L <= 0 or self.uniform_bound_B <= 0:
            raise InvalidInputError("lipschitz_L and uniform_bound_B must be positive")
        if np.abs(table).max() > self.uniform_bound_B + 1e-9:
            raise InvalidInputError("table entries exceed the uniform bound")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "table", table)
        if self.points is not None:
            pts = _as_points(self.points)
            if pts.shape[0] != table.shape[1]:
                raise InvalidInputError("points and table column counts differ")
            diff = pts[:, None, :] - pts[None, :, :]
            d = np.sqrt((diff * diff).sum(axis=2))
            gaps = np.abs(table[:, :, None] - table[:, None, :])
            slack = gaps - self.lipschitz_L * d[None, :, :]
            if slack.max() > 1e-9:
                raise InvalidInputError(
                    f"tabulated values violate the Lipschitz certificate by {slack.max():.3e}"
                )
            pts = pts.copy()
            pts.flags.writeable = False
            object.__setattr__(self, "points", pts)

    @property
    def n_functions(self) -> int:
        return self.table.shape[0]

    @property
    def n_points(self) -> int:
        return self.table.shape[1]

    def sup(self, c) -> float:
        c = _as_coeffs(c, self.n_points)
        return float((self.table @ c).max())

    def sup_batch(self, C) -> np.ndarray:
        C = np.atleast_2d(np.asarray(C, dtype=float))
        if C.shape[1] != self.n_points:
            raise InvalidInputError("coefficient batch has the wrong width")
        return (C @ self.table.T).max(axis=1)

    def as_oracle(self) -> FunctionClassOracle:
        def sup_fn(points, c):
            if points is not None and _as_points(points).shape[0] != self.n_points:
                raise InvalidInputError("finite class is tabulated on a fixed sample")
            return self.sup(c)

        def sup_batch_fn(points, C):
            return self.sup_batch(C)

        return FunctionClassOracle(
            self.lipschitz_L, self.uniform_bound_B, sup_fn, sup_batch_fn,
            eval_fn=lambda fid, i: float(self.table[int(fid), int(i)]),
        )


def finite_class_sup(cls: FiniteFunctionClass, c) -> float:
    """max over tabulated functions of sum_i c_i f(x_i)."""
    return cls.sup(c)


# ---------------------------------------------------------------------------
# Lipschitz balls
# ---------------------------------------------------------------------------


def _pairwise_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def _lipschitz_sup_simplex(pts: np.ndarray, c: np.ndarray, L: float, B: float) -> float:
    """All-pairs LP in shifted variables w = (y + B)/B in [0, 2].

    Keeps every pairwise constraint (not only adjacent ones) so the oracle
    is correct for every ambient dimension.
    """
    n = pts.shape[0]
    if n > SIMPLEX_MAX_POINTS:
        raise BudgetExceededError(
            f"dense simplex oracle capped at n = {SIMPLEX_MAX_POINTS} points, got {n}; "
            "use sampled finite subclasses for larger problems"
        )
    d = _pairwise_distances(pts)
    rows = []
    rhs = []
    for i in range(n):
        for j in range(i + 1, n):
            bound = min(L * d[i, j] / B, 4.0)  # |w_i - w_j| <= 2 anyway
            row = np.zeros(n)
            row[i], row[j] = 1.0, -1.0
            rows.append(row.copy())
            rhs.append(bound)
            row[i], row[j] = -1.0, 1.0
            rows.append(row)
            rhs.append(bound)
    for i in range(n):
        row = np.zeros(n)
        row[i] = 1.0
        rows.append(row)
        rhs.append(2.0)
    value, _ = simplex_maximize(c, np.array(rows), np.array(rhs))
    return float(B * value - B * c.sum())


def _lipschitz_sup_line(x: np.ndarray, c: np.ndarray, L: float, B: float) -> float:
    """Exact 1-d path solver via dynamic programming over concave
    piecewise-linear value functions.

    Processing points in sorted order, V_i(y) is the best objective over the
    first i points given y_i = y.  Each step is a sliding-window maximum
    (halfwidth L * gap), a clip to [-B, B] and the addition of a linear term,
    all of which preserve concave piecewise linearity.  On the line the
    adjacent constraints imply all pairwise ones, so this matches the
    all-pairs LP exactly.
    """
    order = np.argsort(x, kind="stable")
    xs = [-B, B]
    vs = [c[order[0]] * -B, c[order[0]] * B]
    prev = x[order[0]]
    for idx in order[1:]:
        gap = float(x[idx] - prev)
        prev = x[idx]
        a = L * gap
        if a > 0:
            vmax = max(vs)
            pl = vs.index(vmax)
            pr = len(vs) - 1 - vs[::-1].index(vmax)
            xs = [p - a for p in xs[:pl]] + [xs[pl] - a, xs[pr] + a] + \
                 [p + a for p in xs[pr + 1:]]
            vs = vs[:pl] + [vmax, vmax] + vs[pr + 1:]
            # clip the domain back to the box
            lo_v = float(np.interp(-B, xs, vs))
            hi_v = float(np.interp(B, xs, vs))
            inner = [(p, v) for p, v in zip(xs, vs) if -B < p < B]
            xs = [-B] + [p for p, _ in inner] + [B]
            vs = [lo_v] + [v for _, v in inner] + [hi_v]
        ci = c[idx]
        if ci != 0.0:
            vs = [v + ci * p for p, v in zip(xs, vs)]
    return float(max(vs))


def lipschitz_ball_sup(points, c, L: float, R: float, method: str = "auto") -> float:
    """Exact supremum of sum_i c_i f(x_i) over {f : L-Lipschitz, |f| <= L*R}.

    method: "auto" picks the 1-d path solver when k = 1 and the dense
    all-pairs simplex otherwise; "simplex" and "line" force a backend
    ("line" requires k = 1).  The two backends agree exactly on the line.
    """
    if L <= 0 or R <= 0:
        raise InvalidInputError("L and R must be positive")
    pts = _as_points(points)
    n, k = pts.shape
    c = _as_coeffs(c, n)
    B = L * R
    if method == "auto":
        method = "line" if k == 1 else "simplex"
    if method == "line":
        if k != 1:
            raise InvalidInputError("the line solver requires k = 1 points")
        return _lipschitz_sup_line(pts[:, 0], c, L, B)
    if method == "simplex":
        return _lipschitz_sup_simplex(pts, c, L, B)
    raise InvalidInputError(f"unknown method {method!r}")


@dataclass(frozen=True)
class LipschitzBall:
    """The class {f : R^k -> R, L-Lipschitz, |f| <= L * radius_R}."""

    lipschitz_L: float
    radius_R: float

    def __post_init__(self):
        if self.lipschitz_L <= 0 or self.radius_R <= 0:
            raise InvalidInputError("lipschitz_L and radius_R must be positive")

    def sup(self, points, c, method: str = "auto") -> float:
        return lipschitz_ball_sup(points, c, self.lipschitz_L, self.radius_R, method)

    def as_oracle(self) -> FunctionClassOracle:
        return FunctionClassOracle(
            self.lipschitz_L,
            self.lipschitz_L * self.radius_R,
            lambda points, c: self.sup(points, c),
        )


# ---------------------------------------------------------------------------
# Gaussian RKHS balls
# ---------------------------------------------------------------------------


def gaussian_gram(points, sigma: float) -> np.ndarray:
    """Gram matrix of the Gaussian kernel exp(-||x - y||^2 / (2 sigma^2))."""
    if sigma <= 0:
        raise InvalidInputError("sigma must be positive")
    pts = _as_points(points)
    diff = pts[:, None, :] - pts[None, :, :]
    sq = (diff * diff).sum(axis=2)
    return np.exp(-sq / (2.0 * sigma * sigma))


def _clamp_quadform(q):
    q = np.asarray(q, dtype=float)
    if np.any(q < GRAM_NEGATIVE_TOL):
        raise InvalidInputError(
            f"Gram quadratic form is negative beyond rounding: {float(q.min()):.3e}"
        )
    return np.maximum(q, 0.0)


@dataclass(frozen=True)
class GaussianRkhsBall:
    """Ball of radius rho in the RKHS of the Gaussian kernel with bandwidth
    sigma.  Members are rho-bounded and (rho / sigma)-Lipschitz."""

    sigma: float
    rho: float

    def __post_init__(self):
        if self.sigma <= 0 or self.rho <= 0:
            raise InvalidInputError("sigma and rho must be positive")

    @property
    def lipschitz_L(self) -> float:
        return self.rho / self.sigma

    def sup(self, points, c) -> float:
        pts = _as_points(points)
        c = _as_coeffs(c, pts.shape[0])
        G = gaussian_gram(pts, self.sigma)
        quad = _clamp_quadform(c @ G @ c)
        return float(self.rho * np.sqrt(quad))

    def sup_batch(self, points, C) -> np.ndarray:
        pts = _as_points(points)
        C = np.atleast_2d(np.asarray(C, dtype=float))
        if C.shape[1] != pts.shape[0]:
            raise InvalidInputError("coefficient batch has the wrong width")
        G = gaussian_gram(pts, self.sigma)
        quad = _clamp_quadform(np.einsum("bi,ij,bj->b", C, G, C))
        return self.rho * np.sqrt(quad)

    def as_oracle(self) -> FunctionClassOracle:
        return FunctionClassOracle(
            self.lipschitz_L, self.rho,
            lambda points, c: self.sup(points, c),
            lambda points, C: self.sup_batch(points, C),
        )


def rkhs_ball_sup(points, c, ball: GaussianRkhsBall) -> float:
    """sup over the RKHS ball of sum_i c_i f(x_i) = rho * sqrt(c' G c)."""
    return ball.sup(points, c)


# ---------------------------------------------------------------------------
# Validation harness and samplers
# ---------------------------------------------------------------------------


def oracle_convexity_check(oracle: FunctionClassOracle, points, c1, c2,
                           lam: float, tol: float = 1e-9) -> bool:
    """True iff the oracle is convex along the segment [c1, c2] at lam."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidInputError("lam must lie in [0, 1]")
    pts = _as_points(points)
    c1 = _as_coeffs(c1, pts.shape[0])
    c2 = _as_coeffs(c2, pts.shape[0])
    mixed = oracle.sup(pts, lam * c1 + (1.0 - lam) * c2)
    return mixed <= lam * oracle.sup(pts, c1) + (1.0 - lam) * oracle.sup(pts, c2) + tol


@dataclass(frozen=True)
class PiecewiseLinearClass:
    """Finitely many L-Lipschitz piecewise-linear functions on [-R, R],
    evaluable anywhere on the interval."""

    knots: np.ndarray   # (cells + 1,)
    values: np.ndarray  # (r, cells + 1)
    lipschitz_L: float
    radius_R: float

    @property
    def n_functions(self) -> int:
        return self.values.shape[0]

    def eval_batch(self, x) -> np.ndarray:
        """Values of every function at the given 1-d points, shape (r, len(x))."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.vstack([np.interp(x, self.knots, row) for row in self.values])

    def tabulate(self, points_1d) -> FiniteFunctionClass:
        x = np.atleast_1d(np.asarray(points_1d, dtype=float))
        return FiniteFunctionClass(
            table=self.eval_batch(x),
            lipschitz_L=self.lipschitz_L,
            uniform_bound_B=self.lipschitz_L * self.radius_R,
            points=x[:, None],
        )

    def as_oracle(self) -> FunctionClassOracle:
        def sup_fn(points, c):
            pts = _as_points(points)
            if pts.shape[1] != 1:
                raise InvalidInputError("piecewise-linear classes live on the line")
            vals = self.eval_batch(pts[:, 0])
            return float((vals @ _as_coeffs(c, pts.shape[0])).max())

        def sup_batch_fn(points, C):
            pts = _as_points(points)
            vals = self.eval_batch(pts[:, 0])
            return (np.atleast_2d(C) @ vals.T).max(axis=1)

        return FunctionClassOracle(
            self.lipschitz_L, self.lipschitz_L * self.radius_R, sup_fn, sup_batch_fn,
        )


def sample_piecewise_linear_class(n_functions: int, L: float, R: float, seed: int,
                                  cells: int = 32) -> PiecewiseLinearClass:
    """Random L-Lipschitz piecewise-linear functions on [-R, R]: random
    slopes in [-L, L] on a uniform grid, clipped to [-L*R, L*R].

    Clipping is a contraction, so the Lipschitz certificate survives it.
    """
    if n_functions < 1 or L <= 0 or R <= 0 or cells < 1:
        raise InvalidInputError("need n_functions >= 1, L > 0, R > 0, cells >= 1")
    rng = np.random.default_rng(seed)
    knots = np.linspace(-R, R, cells + 1)
    dx = knots[1] - knots[0]
    slopes = rng.uniform(-L, L, size=(n_functions, cells))
    starts = rng.uniform(-L * R, L * R, size=(n_functions, 1))
    values = np.concatenate([starts, starts + np.cumsum(slopes * dx, axis=1)], axis=1)
    values = np.clip(values, -L * R, L * R)
    values.flags.writeable = False
    ro_knots = knots.copy()
    ro_knots.flags.writeable = False
    return PiecewiseLinearClass(ro_knots, values, float(L), float(R))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def finite_class_to_csv(cls: FiniteFunctionClass, values_path, meta_path) -> None:
    """Write (func_id, point_id, value) triplets plus a key=value sidecar
    holding the class metadata {L, B}."""
    import csv as _csv

    with open(values_path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["func_id", "point_id", "value"])
        for j in range(cls.n_functions):
            for i in range(cls.n_points):
                writer.writerow([str(j), str(i), repr(float(cls.table[j, i]))])
    with open(meta_path, "w") as fh:
        fh.write(f"L = {cls.lipschitz_L!r}\n")
        fh.write(f"B = {cls.uniform_bound_B!r}\n")


def finite_class_from_csv(values_path, meta_path) -> FiniteFunctionClass:
    import csv as _csv

    meta = {}
    with open(meta_path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            meta[key.strip()] = float(value.strip())
    for key in ("L", "B"):
        if key not in meta:
            raise InvalidInputError(f"sidecar is missing {key}")
    cells = {}
    with open(values_path, newline="") as fh:
        reader = _csv.reader(fh)
        header = next(reader, None)
        if header != ["func_id", "point_id", "value"]:
            raise InvalidInputError("unexpected header in function-class CSV")
        for row in reader:
            if not row:
                continue
            cells[(int(row[0]), int(row[1]))] = float(row[2])
    if not cells:
        raise InvalidInputError("function-class CSV has no values")
    r = max(j for j, _ in cells) + 1
    n = max(i for _, i in cells) + 1
    table = np.full((r, n), np.nan)
    for (j, i), v in cells.items():
        table[j, i] = v
    if np.any(np.isnan(table)):
        raise InvalidInputError("function-class CSV is missing entries")
    return FiniteFunctionClass(table=table, lipschitz_L=meta["L"], uniform_bound_B=meta["B"])
