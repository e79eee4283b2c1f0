"""Norm of superpositions of scattering states.

A packet psi(t, x) = sum_j w_j a_j e^{-i E_j t} phi_{k_j}(x) has

    N(t) = 2 pi sum_i w_i |a_i|^2 d_i
           + sum_{i != j} w_i w_j conj(a_i) a_j e^{i (E_i - E_j) t} Delta(k_j, k_i)

with d_i = (1 + |R_i|^2 + |T_i|^2) / 2, the coefficient of 2 pi delta(k - k')
in <phi_k|phi_k'>.  The i = j terms of the finite part use the continuous
limit Delta(k, k) = i (T* T' + R* R') - Im(R) / k, which keeps the double
sum a product Gauss-Legendre rule instead of an O(1/n) approximation.
:func:`position_space_norm` integrates |psi|^2 over x directly as an
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from scatterkit.potentials import Family, Potential, PotentialError
from scatterkit.quadrature import panel_nodes
from scatterkit.states import coefficients, square_well_coefficients


@dataclass(frozen=True)
class SpectralProfile:
    k_grid: np.ndarray
    amplitudes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k_grid, dtype=float)
        if k.ndim != 1 or k.size == 0 or np.any(k <= 0) or np.any(np.diff(k) <= 0):
            raise ValueError("k_grid must be positive and strictly increasing")
        if np.shape(self.amplitudes) != k.shape or np.shape(self.weights) != k.shape:
            raise ValueError("amplitudes and weights must match k_grid")

    @property
    def norm(self) -> float:
        return float(np.sum(self.weights * np.abs(self.amplitudes) ** 2))

    @property
    def mean_momentum(self) -> float:
        return float(np.sum(self.weights * np.abs(self.amplitudes) ** 2 * self.k_grid) / self.norm)


def gaussian_amplitude(k, k0: float, sigma: float):
    return np.exp(-((np.asarray(k) - k0) ** 2) / (4 * sigma * sigma))


def gaussian_profile(k0: float, sigma: float, n: int = 64, span: float = 5.0) -> SpectralProfile:
    """Gaussian a(k) ~ exp(-(k-k0)^2/(4 sigma^2)) on n Gauss-Legendre nodes in k0 +- span sigma."""
    if n < 16:
        raise ValueError("n must be at least 16")
    if sigma <= 0 or span <= 0:
        raise ValueError("sigma and span must be positive")
    lo, hi = k0 - span * sigma, k0 + span * sigma
    if lo <= 0:
        raise ValueError(f"grid [{lo}, {hi}] crosses k = 0")
    x, w = np.polynomial.legendre.leggauss(n)
    k = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
    wk = 0.5 * (hi - lo) * w
    a = gaussian_amplitude(k, k0, sigma)
    a = a / math.sqrt(np.sum(wk * a * a))
    return SpectralProfile(k, a.astype(complex), wk)


def _coefficient_arrays(p: Potential, ks: np.ndarray):
    cs = [coefficients(p, float(k)) for k in ks]
    R = np.array([c.R for c in cs])
    T = np.array([c.T for c in cs])
    return R, T


def delta_diagonal(p: Potential, ks) -> np.ndarray:
    """lim_{k2 -> k1} Delta(k1, k2), with derivatives by a 4-point central difference."""
    ks = np.asarray(ks, dtype=float)
    h = 1e-3 * np.minimum(ks / 4, 1.0)
    R, T = _coefficient_arrays(p, ks)
    dR = 0j
    dT = 0j
    for step, wgt in ((2, -1), (1, 8), (-1, -8), (-2, 1)):
        Rs, Ts = _coefficient_arrays(p, ks + step * h)
        dR = dR + wgt * Rs
        dT = dT + wgt * Ts
    dR, dT = dR / (12 * h), dT / (12 * h)
    return (1j * (np.conj(T) * dT + np.conj(R) * dR)).real - R.imag / ks


def delta_matrix(p: Potential, ks: np.ndarray, diagonal: bool = True) -> np.ndarray:
    """M[i, j] = Delta(k_j, k_i), the finite part of <phi_ki|phi_kj>.

    The diagonal holds the k1 -> k2 limit, or zeros with ``diagonal=False``.
    """
    if p.family is Family.LINEAR:
        raise PotentialError("no Delta for the linear potential")
    ks = np.asarray(ks, dtype=float)
    R, T = _coefficient_arrays(p, ks)
    k1 = ks[None, :]  # column index j plays k1
    k2 = ks[:, None]
    R1, T1 = R[None, :], T[None, :]
    R2c, T2c = np.conj(R)[:, None], np.conj(T)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        M = 1j * ((T2c * T1 - 1) + R2c * R1) / (k1 - k2) + 1j * (R1 - R2c) / (k1 + k2)
    np.fill_diagonal(M, delta_diagonal(p, ks) if diagonal else 0)
    return M


def diagonal_weights(p: Potential, ks) -> np.ndarray:
    R, T = _coefficient_arrays(p, np.asarray(ks, dtype=float))
    return (1 + np.abs(R) ** 2 + np.abs(T) ** 2) / 2


def norm_trace(p: Potential, prof: SpectralProfile, times) -> tuple[np.ndarray, np.ndarray]:
    """(Re N(t), Im N(t)) on an array of times."""
    ks, w, a = prof.k_grid, prof.weights, prof.amplitudes
    M = delta_matrix(p, ks)
    diag = 2 * math.pi * np.sum(w * np.abs(a) ** 2 * diagonal_weights(p, ks))
    E = ks * ks / 2
    times = np.atleast_1d(np.asarray(times, dtype=float))
    c = (w * a)[None, :] * np.exp(-1j * np.outer(times, E))
    off = np.einsum("ti,ij,tj->t", np.conj(c), M, c)
    N = diag + off
    return N.real, N.imag


def norm_at_time(p: Potential, prof: SpectralProfile, t: float) -> float:
    re, _ = norm_trace(p, prof, [t])
    return float(re[0])


def norm_drift_bound(prof: SpectralProfile, delta_fn: Callable | np.ndarray) -> float:
    """2 sum_{i != j} w_i w_j |a_i| |a_j| |Delta(k_i, k_j)|.

    ``delta_fn`` is either a precomputed matrix or a callable (k1, k2) -> Delta.
    """
    ks = prof.k_grid
    if callable(delta_fn):
        n = ks.size
        M = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                if i != j:
                    M[i, j] = delta_fn(ks[i], ks[j])
    else:
        M = np.asarray(delta_fn)
    wa = prof.weights * np.abs(prof.amplitudes)
    absM = np.abs(M)
    np.fill_diagonal(absM, 0)
    return float(2 * wa @ absM @ wa)


# -- position-space oracle -------------------------------------------------

def _state_matrix(p: Potential, ks: np.ndarray, xs: np.ndarray, coeffs) -> np.ndarray:
    """phi_k(x) for all pairs, shape (len(xs), len(ks))."""
    R, T, Ap, Am, q = coeffs
    X = xs[:, None]
    K = ks[None, :]
    h = p.width / 2 if p.family is Family.SQUARE_WELL else 0.0
    left = np.exp(1j * K * X) + R[None, :] * np.exp(-1j * K * X)
    right = T[None, :] * np.exp(1j * K * X)
    out = np.where(X < -h, left, right)
    if h > 0:
        Q = q[None, :]
        inner = Ap[None, :] * np.exp(1j * Q * X) + Am[None, :] * np.exp(-1j * Q * X)
        out = np.where((X >= -h) & (X <= h), inner, out)
    return out


def position_space_norm(p: Potential, k0: float, sigma: float, times, span: float = 5.0,
                        k_panel: float = 0.1, k_order: int = 40, x_panel: float = 0.5,
                        x_order: int = 16, x_pad: float = 40.0, chunk: int = 2048) -> np.ndarray:
    """int |psi(t, x)|^2 dx by direct quadrature in k and x.

    psi uses the same truncated Gaussian as :func:`gaussian_profile`, normalised
    to int |a|^2 dk = 1, sampled on a much finer panel grid.  The x window covers
    every packet component up to the largest time plus ``x_pad``.
    """
    if p.family not in (Family.FREE, Family.DELTA, Family.SQUARE_WELL):
        raise PotentialError("position-space oracle supports free, delta and square-well states")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    lo, hi = k0 - span * sigma, k0 + span * sigma
    if lo <= 0:
        raise ValueError("k grid crosses 0")
    npan = max(1, int(math.ceil((hi - lo) / k_panel)))
    kn, kw = panel_nodes(np.linspace(lo, hi, npan + 1), k_order)
    ks, kw = kn.ravel(), kw.ravel()
    a = gaussian_amplitude(ks, k0, sigma)
    a = a / math.sqrt(np.sum(kw * a * a))
    if p.family is Family.SQUARE_WELL:
        cs = [square_well_coefficients(float(k), p) for k in ks]
        coeffs = (np.array([c.R for c in cs]), np.array([c.T for c in cs]),
                  np.array([c.A_plus for c in cs]), np.array([c.A_minus for c in cs]),
                  np.array([c.k_in for c in cs]))
    else:
        R, T = _coefficient_arrays(p, ks)
        coeffs = (R, T, None, None, None)
    W = hi * float(np.max(np.abs(times))) + x_pad
    step = x_panel
    brk = [-W, W] + ([-p.width / 2, p.width / 2] if p.family is Family.SQUARE_WELL else [0.0])
    brk = sorted(set(brk))
    edges = np.concatenate([np.linspace(a_, b_, max(1, int(math.ceil((b_ - a_) / step))) + 1)[:-1]
                            for a_, b_ in zip(brk[:-1], brk[1:])] + [np.array([W])])
    xn, xw = panel_nodes(edges, x_order)
    xs, xw = xn.ravel(), xw.ravel()
    C = (kw * a)[:, None] * np.exp(-1j * np.outer(ks * ks / 2, times))  # (nk, nt)
    total = np.zeros(times.size)
    for s in range(0, xs.size, chunk):
        phi = _state_matrix(p, ks, xs[s:s + chunk], coeffs)
        psi = phi @ C
        total += xw[s:s + chunk] @ (np.abs(psi) ** 2)
    return total
