"""Panel Gauss-Legendre quadrature for oscillatory integrands."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from scatterkit.special import ConvergenceError

_N_LO, _N_HI = 10, 20
_GL = {n: np.polynomial.legendre.leggauss(n) for n in (_N_LO, _N_HI, 8, 16)}


def gauss_legendre(n: int):
    if n not in _GL:
        _GL[n] = np.polynomial.legendre.leggauss(n)
    return _GL[n]


def panel_nodes(edges: np.ndarray, n: int):
    """Nodes and weights of n-point Gauss-Legendre on every panel of ``edges``."""
    x, w = gauss_legendre(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes, weights


def oscillatory_quad(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                     freq: float, tol: float = 1e-12, max_panels: int = 200_000,
                     breakpoints=()) -> tuple[complex, float]:
    """Integrate f over [lo, hi] with panels no wider than a quarter period.

    Each panel is integrated with 10- and 20-point rules; panels whose two
    estimates differ by more than their share of ``tol`` are bisected.
    Returns ``(value, error_estimate)``.
    """
    if hi <= lo:
        return 0j, 0.0
    width = (hi - lo)
    step = (2 * math.pi / freq) / 4 if freq > 0 else width
    cuts = sorted({lo, hi, *[b for b in breakpoints if lo < b < hi]})
    edges = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil((b - a) / step)))
        edges.extend(np.linspace(a, b, n + 1)[:-1])
    edges.append(hi)
    pending = [np.asarray(edges, dtype=float)]
    total = 0j
    err_total = 0.0
    used = 0
    while pending:
        e = pending.pop()
        used += len(e) - 1
        if used > max_panels:
            raise ConvergenceError(f"quadrature exceeded {max_panels} panels on [{lo}, {hi}]")
        xl, wl = panel_nodes(e, _N_LO)
        xh, wh = panel_nodes(e, _N_HI)
        il = np.sum(wl * f(xl.ravel()).reshape(xl.shape), axis=1)
        ih = np.sum(wh * f(xh.ravel()).reshape(xh.shape), axis=1)
        err = np.abs(ih - il)
        share = tol * (e[1:] - e[:-1]) / width
        ok = err <= np.maximum(share, 1e-300)
        total += np.sum(ih[ok])
        err_total += float(np.sum(err[ok]))
        bad = np.nonzero(~ok)[0]
        if bad.size:
            for i in bad:
                a, b = e[i], e[i + 1]
                pending.append(np.array([a, 0.5 * (a + b), b]))
    return complex(total), err_total
