"""Independent brute-force oracles used by the unit and acceptance suites.

Nothing here touches the library's solver paths: values come from direct
enumeration, grid search and interval arithmetic only, so agreement between
these oracles and the library is a genuine two-route check.
"""

import numpy as np


def pairwise_dist(pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if pts.ndim == 2 and pts.shape[1] == 0:
        raise ValueError("empty points")
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def grid_lipschitz_sup(pts, c, L, R, divisor=200):
    """Brute-force grid search for sup sum c_i y_i over the Lipschitz value
    polytope, y coordinates on a step R/divisor grid over [-L*R, L*R].

    Supports n <= 4.  For n = 4 the first three coordinates are gridded and
    the last is taken at the exact endpoint of its feasible interval (pure
    interval arithmetic, no LP).
    """
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    c = np.asarray(c, dtype=float)
    B = L * R
    step = R / divisor
    n_cells = int(round(2 * B / step))
    grid = np.linspace(-B, B, n_cells + 1)
    d = L * pairwise_dist(pts)

    if n == 1:
        return float((c[0] * grid).max())
    if n == 2:
        vals = c[0] * grid[:, None] + c[1] * grid[None, :]
        mask = np.abs(grid[:, None] - grid[None, :]) <= d[0, 1] + 1e-12
        return float(vals[mask].max())
    eps = 1e-12

    def window(y, radius):
        # contiguous grid indices within |grid - y| <= radius
        a = int(np.searchsorted(grid, y - radius - eps, side="left"))
        b = int(np.searchsorted(grid, y + radius + eps, side="right"))
        return a, b

    if n == 3:
        best = -np.inf
        pair23 = np.abs(grid[:, None] - grid[None, :]) <= d[1, 2] + eps
        base23 = c[1] * grid[:, None] + c[2] * grid[None, :]
        for y1 in grid:
            a2, b2 = window(y1, d[0, 1])
            a3, b3 = window(y1, d[0, 2])
            if a2 >= b2 or a3 >= b3:
                continue
            m = pair23[a2:b2, a3:b3]
            if m.any():
                top = float(np.max(base23[a2:b2, a3:b3], initial=-np.inf, where=m))
                best = max(best, c[0] * y1 + top)
        return float(best)
    if n == 4:
        best = -np.inf
        y2g = grid[:, None]
        y3g = grid[None, :]
        pair23 = np.abs(y2g - y3g) <= d[1, 2] + eps
        base23 = c[1] * y2g + c[2] * y3g
        lo23 = np.maximum(y2g - d[1, 3], y3g - d[2, 3])
        hi23 = np.minimum(y2g + d[1, 3], y3g + d[2, 3])
        for y1 in grid:
            a2, b2 = window(y1, d[0, 1])
            a3, b3 = window(y1, d[0, 2])
            if a2 >= b2 or a3 >= b3:
                continue
            lo = np.maximum(lo23[a2:b2, a3:b3], max(-B, y1 - d[0, 3]))
            hi = np.minimum(hi23[a2:b2, a3:b3], min(B, y1 + d[0, 3]))
            feasible = pair23[a2:b2, a3:b3] & (lo <= hi + eps)
            if not feasible.any():
                continue
            y4 = hi if c[3] > 0 else lo
            vals = base23[a2:b2, a3:b3] + c[3] * y4
            best = max(best, c[0] * y1 + float(np.max(vals, initial=-np.inf, where=feasible)))
        return float(best)
    raise ValueError("grid oracle supports n <= 4")


def rkhs_ball_mc_lower(pts, c, sigma, rho, n_samples, seed):
    """Best value of sum c_i f(x_i) over randomly sampled RKHS-ball members
    f = sum_j a_j K(x_j, .) normalized to norm rho.  Never exceeds the
    closed form and approaches it as n_samples grows."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if pts.ndim == 1:
        pts = pts[:, None]
    d2 = pairwise_dist(pts) ** 2
    G = np.exp(-d2 / (2.0 * sigma ** 2))
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n_samples, pts.shape[0]))
    norms = np.sqrt(np.maximum(np.einsum("si,ij,sj->s", A, G, A), 1e-300))
    vals = rho * (A @ (G @ np.asarray(c, dtype=float))) / norms
    return float(vals.max())


def enumerate_bernoulli_sup_mean(vectors):
    """E sup over rows of the sign-weighted sum, by full enumeration."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    width = vectors.shape[1]
    idx = np.arange(2 ** width)
    signs = ((idx[:, None] >> np.arange(width)) & 1) * 2.0 - 1.0
    return float((signs @ vectors.T).max(axis=1).mean())


def ols_by_hand(xs, ys):
    """Textbook two-pass OLS, independent of the library fit routine."""
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    n = len(xs)
    xm = sum(xs) / n
    ym = sum(ys) / n
    sxx = sum((x - xm) ** 2 for x in xs)
    sxy = sum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, ym - slope * xm
