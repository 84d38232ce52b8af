"""Gauss-Legendre rules in double and extended precision, with graded panels.

Fixed-order Gauss-Legendre is used everywhere: it integrates polynomials of
degree < 2*order exactly and converges geometrically for integrands analytic
in a neighborhood of the interval.  For Cauchy kernels with a pole close to
the interval, ``graded_panels`` splits the interval geometrically toward the
near-singular point so that every panel sees the pole at O(1) relative
distance.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp, mpf, workprec

_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_GAUSS_MP_CACHE: dict[tuple[int, int], tuple[list, list]] = {}


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1] in double precision (cached)."""
    if order not in _GAUSS_CACHE:
        _GAUSS_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GAUSS_CACHE[order]


def _legendre_pair(n: int, x):
    """(P_n(x), P_n'(x)) by the three-term recurrence, mpmath arithmetic."""
    pm, p = mpf(1), x
    for k in range(1, n):
        pm, p = p, ((2 * k + 1) * x * p - k * pm) / (k + 1)
    dp = n * (x * p - pm) / (x * x - 1)
    return p, dp


def gauss_legendre_mp(order: int, prec: int) -> tuple[list, list]:
    """Nodes and weights on [-1, 1] at ``prec`` bits, Newton-polished from double seeds."""
    key = (order, prec)
    if key in _GAUSS_MP_CACHE:
        return _GAUSS_MP_CACHE[key]
    xs, _ = gauss_legendre(order)
    nodes: list = [None] * order
    weights: list = [None] * order
    with workprec(prec + 24):
        tol = mpf(2) ** (-(prec + 8))
        half = (order + 1) // 2
        for i in range(order - half, order):
            x = mpf(float(xs[i]))
            dp = mpf(1)
            for _ in range(60):
                p, dp = _legendre_pair(order, x)
                dx = p / dp
                x -= dx
                if abs(dx) < tol * max(1, abs(x)):
                    p, dp = _legendre_pair(order, x)
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            nodes[i], weights[i] = x, w
            nodes[order - 1 - i], weights[order - 1 - i] = -x, w
        if order % 2 == 1:
            x = mpf(0)
            p, dp = _legendre_pair(order, x)
            nodes[order // 2] = x
            weights[order // 2] = 2 / (dp * dp)
    _GAUSS_MP_CACHE[key] = (nodes, weights)
    return nodes, weights


def map_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to [a, b], double precision."""
    x, w = gauss_legendre(order)
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    return mid + rad * x, rad * w


def map_rule_mp(a, b, order: int, prec: int) -> tuple[list, list]:
    """Gauss-Legendre rule mapped to [a, b], ``prec``-bit precision."""
    x, w = gauss_legendre_mp(order, prec)
    with workprec(prec + 24):
        mid, rad = (mpf(a) + mpf(b)) / 2, (mpf(b) - mpf(a)) / 2
        return [mid + rad * xi for xi in x], [rad * wi for wi in w]


def graded_panels(a: float, b: float, x0: float, h: float) -> list[tuple[float, float]]:
    """Split [a, b] into panels geometrically refined toward x0.

    The smallest panel adjacent to x0 has width ~h; widths then double.  If x0
    is outside [a, b], grading starts from the nearest endpoint.  Used for
    Cauchy integrals with a pole at distance ~h from the interval.
    """
    x0 = min(max(x0, a), b)
    h = max(h, (b - a) * 1e-15)
    cuts = {a, b, x0}
    for side in (-1, 1):
        w = h
        t = x0 + side * w
        while a < t < b:
            cuts.add(t)
            w *= 2
            t = x0 + side * w
    pts = sorted(cuts)
    return list(zip(pts[:-1], pts[1:]))
