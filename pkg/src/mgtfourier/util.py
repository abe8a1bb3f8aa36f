"""Small shared numerics: golden-section maximization and scalar bisection."""

from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a: float, b: float, tol: float = 1e-8):
    """Maximize f on [a, b] by golden-section search.

    Returns (x, f(x)).  Assumes f is unimodal on the bracket; callers locate
    the bracket with a coarse grid first.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def grid_then_golden(f, a: float, b: float, n_grid: int = 200, tol: float = 1e-8):
    """Coarse grid locates the best bracket, golden section refines it.

    Robust for functions that are pointwise minima of smooth branches, hence
    possibly non-smooth at branch crossings.
    """
    if n_grid < 3:
        raise ValueError("need at least 3 grid points")
    step = (b - a) / (n_grid - 1)
    xs = [a + i * step for i in range(n_grid)]
    vals = [f(x) for x in xs]
    i = max(range(n_grid), key=vals.__getitem__)
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, n_grid - 1)]
    return golden_max(f, lo, hi, tol=tol)


def bisect_root(f, a: float, b: float, tol: float = 1e-14, max_iter: int = 200) -> float:
    """Root of f on [a, b] by bisection; f(a) and f(b) must differ in sign."""
    fa, fb = f(a), f(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValueError(f"no sign change on [{a}, {b}]")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0 or b - a < tol:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def parabolic_argmax(x0, x1, x2, y0, y1, y2) -> float:
    """Vertex abscissa of the parabola through three points.

    Falls back to the middle point when the three values are collinear.
    """
    denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if denom == 0:
        return x1
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    return x1 - 0.5 * num / denom
