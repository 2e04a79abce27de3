"""Grid scan followed by golden-section refinement (1-D, bounded)."""
from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f, a, b, tol=1e-10, max_iter=200):
    """Minimise a unimodal f on [a, b]; returns (x, f(x))."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # the bracket midpoint is not always the best point seen
    best = min((fx, x), (fc, c), (fd, d))
    return best[1], best[0]


def scan_then_refine(f, lo, hi, n_grid=401, tol=1e-10):
    """Dense grid over [lo, hi], then golden section around the best node."""
    xs = np.linspace(lo, hi, n_grid)
    ys = np.array([f(x) for x in xs])
    k = int(np.argmin(ys))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, n_grid - 1)]
    x, fx = golden_section(f, a, b, tol=tol)
    if ys[k] < fx:
        return float(xs[k]), float(ys[k])
    return float(x), float(fx)
