"""Brute-force reference computations.

Nothing here uses the boundary-current identity, so the values can arbitrate
between closed forms: adaptive quadrature of the wavefunctions, averaging and
least-squares extraction of windowed overlaps, and a radial ODE solver.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from scatterkit.overlap import (
    DegenerateMomentaError,
    WindowSpec,
    _check_window,
    exp_integral,
    window_overlaps,
)
from scatterkit.potentials import Family, Potential, sech2_cutoff
from scatterkit.quadrature import oscillatory_quad, panel_nodes
from scatterkit.special import ConvergenceError
from scatterkit.states import coefficients, eval_wavefunction


def quad_overlap(p: Potential, k1: float, k2: float, w: WindowSpec, tol: float = 1e-12) -> complex:
    """Panel Gauss-Legendre quadrature of conj(phi_k1) phi_k2 over the window."""
    if tol < 1e-13:
        raise ValueError("tol must be >= 1e-13")
    _check_window(p, w)
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    if p.family is Family.SQUARE_WELL:
        brk = (-p.width / 2, p.width / 2)
    elif p.family is Family.SECH2:
        X = sech2_cutoff(p)
        brk = (-X, X)
    else:
        brk = (0.0,)

    def f(x):
        return np.conj(eval_wavefunction(p, c1, x)) * eval_wavefunction(p, c2, x)

    val, err = oscillatory_quad(f, w.x1, w.x2, k1 + k2, tol=tol, breakpoints=brk)
    return val


# -- extraction of the finite part of windowed overlaps --------------------

@dataclass(frozen=True)
class CesaroExtraction:
    """Windowed overlaps sampled on [lambda0, 2 lambda0] and their limits.

    ``averaged`` is the running (Cesaro) mean.  ``fit_constant`` and
    ``fit_amplitudes`` come from a least-squares fit of
    ``c0 + sum_j A_j exp(i omega_j Lambda)`` with omega_j = +-(k1-k2), +-(k1+k2);
    ``fit_finite_part = c0 + sum_j A_j`` is what remains after replacing each
    exp(i omega Lambda)/(i omega) by its delta function plus 1/(i omega).

    ``convergence_estimate`` bounds the distance of the mean from its limit,
    sum_j 2 |A_j| / (|omega_j| lambda0), and so scales exactly as 1/lambda0.
    ``mean_shift`` is |avg(lambda0) - avg(2 lambda0)|, which fluctuates with
    the phases of the oscillations.
    """

    lambda_grid: np.ndarray
    raw_overlaps: np.ndarray
    averaged: complex
    convergence_estimate: float
    fit_constant: complex
    fit_amplitudes: np.ndarray
    omegas: np.ndarray
    fit_residual: float
    mean_shift: float

    @property
    def fit_finite_part(self) -> complex:
        return complex(self.fit_constant + np.sum(self.fit_amplitudes))


def _lambda_nodes(lo: float, hi: float, n: int, order: int = 16):
    panels = max(1, n // order)
    nodes, weights = panel_nodes(np.linspace(lo, hi, panels + 1), order)
    return nodes.ravel(), weights.ravel()


def _extract(series: Callable[[np.ndarray], np.ndarray], k1: float, k2: float,
             lambda0: float, n_lambda: int) -> CesaroExtraction:
    if abs(k1 - k2) <= 1e-9 * max(k1, k2) or k1 + k2 <= 0:
        raise DegenerateMomentaError("extraction needs k1 != +-k2")
    lam, wts = _lambda_nodes(lambda0, 2 * lambda0, n_lambda)
    raw = series(lam)
    avg = complex(np.sum(wts * raw) / lambda0)
    lam2, wts2 = _lambda_nodes(2 * lambda0, 4 * lambda0, 2 * n_lambda)
    avg2 = complex(np.sum(wts2 * series(lam2)) / (2 * lambda0))
    omegas = np.array([k1 - k2, k2 - k1, k1 + k2, -(k1 + k2)])
    basis = np.column_stack([np.ones_like(lam)] + [np.exp(1j * om * lam) for om in omegas])
    coef, *_ = np.linalg.lstsq(basis, raw, rcond=None)
    resid = float(np.max(np.abs(basis @ coef - raw)))
    bound = float(np.sum(2 * np.abs(coef[1:]) / (np.abs(omegas) * lambda0)))
    return CesaroExtraction(lam, raw, avg, bound, complex(coef[0]), coef[1:], omegas, resid,
                            abs(avg - avg2))


def cesaro_delta_extract(p: Potential, k1: float, k2: float, lambda0: float,
                         n_lambda: int = 2048) -> CesaroExtraction:
    """Average <phi_k2|phi_k1> on [-Lambda, Lambda] over Lambda in [lambda0, 2 lambda0].

    The orientation <phi_k2|phi_k1> is the one in which Delta(k1, k2) is defined.
    """
    if p.family is Family.SQUARE_WELL and lambda0 <= p.width:
        raise ValueError("lambda0 must exceed the well width")
    if p.family is Family.SECH2 and lambda0 <= sech2_cutoff(p):
        raise ValueError("lambda0 must exceed the sech2 cutoff")
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    return _extract(lambda lam: window_overlaps(p, k2, k1, -lam, lam, c2, c1), k1, k2, lambda0, n_lambda)


# -- radial s-wave states (hbar = 1, m = 1/2, E = k^2) ---------------------

class RadialCoefficients(NamedTuple):
    T: complex
    R: complex
    phi0: complex
    dphi0: complex


@dataclass(frozen=True)
class RadialWell:
    """V(r) = V0 for r < a, 0 beyond."""

    V0: float
    a: float

    def __call__(self, r):
        return np.where(np.asarray(r) < self.a, self.V0, 0.0)

    @property
    def breakpoints(self):
        return (self.a,)


class RadialState:
    """Regular radial solution normalised to sin(kr + delta) at large r.

    The ODE -u'' + V u = k^2 u is integrated from u(0)=0, u'(0)=1 out to
    ``r_max + fit_length`` and (T, R) are fitted by least squares on the tail.
    """

    def __init__(self, V, k: float, r_max: float, fit_periods: int = 4,
                 rtol: float = 1e-12, breakpoints=(), fit_tol: float = 1e-8):
        if k <= 0:
            raise ValueError("k must be positive")
        self.k = k
        self.r_max = r_max
        r_end = r_max + fit_periods * 2 * math.pi / k
        brk = sorted({0.0, r_end, *[b for b in breakpoints if 0 < b < r_end],
                      *getattr(V, "breakpoints", ())})
        brk = [b for b in brk if b <= r_end]

        def rhs(r, y):
            return [y[1], (float(V(r)) - k * k) * y[0]]

        y = [0.0, 1.0]
        self._sols = []
        for lo, hi in zip(brk[:-1], brk[1:]):
            sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=rtol, atol=1e-14,
                            dense_output=True)
            if not sol.success:
                raise ConvergenceError(sol.message)
            self._sols.append((lo, hi, sol.sol))
            y = sol.y[:, -1]
        self._edges = np.array(brk)
        rs = np.linspace(r_max, r_end, 400)
        u = self._raw(rs)
        basis = np.column_stack([np.exp(1j * k * rs), np.exp(-1j * k * rs)])
        (alpha, beta), *_ = np.linalg.lstsq(basis, u.astype(complex), rcond=None)
        scale_ = np.max(np.abs(u))
        self.fit_residual = float(np.max(np.abs(basis @ [alpha, beta] - u)) / scale_)
        if self.fit_residual > fit_tol:
            raise ConvergenceError(f"asymptotic fit residual {self.fit_residual:.3g} exceeds {fit_tol:g}")
        self.scale = 1.0 / (2 * abs(alpha))
        self.T = complex(self.scale * alpha)
        self.R = complex(self.scale * beta)
        self.r_end = r_end

    def _raw(self, r, deriv=False):
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        idx = np.clip(np.searchsorted(self._edges, r, side="right") - 1, 0, len(self._sols) - 1)
        for i, (_, _, f) in enumerate(self._sols):
            m = idx == i
            if np.any(m):
                out[m] = f(r[m])[1 if deriv else 0]
        return out

    @property
    def coefficients(self) -> RadialCoefficients:
        return RadialCoefficients(self.T, self.R, 0j, complex(self.scale))

    @property
    def delta(self) -> float:
        """Phase shift, with T = e^{i delta}/(2i)."""
        return cmath.phase(2j * self.T)

    def __call__(self, r, deriv=False):
        r = np.asarray(r, dtype=float)
        k = self.k
        inner = r <= self.r_max
        out = np.empty(r.shape, dtype=complex)
        out[inner] = self.scale * self._raw(r[inner], deriv)
        ro = r[~inner]
        if deriv:
            out[~inner] = 1j * k * (self.T * np.exp(1j * k * ro) - self.R * np.exp(-1j * k * ro))
        else:
            out[~inner] = self.T * np.exp(1j * k * ro) + self.R * np.exp(-1j * k * ro)
        return out


def radial_ode_solve(V, k: float, r_max: float, **kw) -> RadialCoefficients:
    """(T, R, phi(0), phi'(0)) of the regular s-wave solution normalised to sin(kr + delta)."""
    return RadialState(V, k, r_max, **kw).coefficients


def radial_square_well(k: float, V0: float, a: float) -> RadialCoefficients:
    """Analytic s-wave coefficients for V = V0 on r < a (m = 1/2).

    Inside u = B sin(K r)/K with K^2 = k^2 - V0 (real for either sign of
    K^2), outside u = sin(k r + delta).  Matching u and u' at r = a gives
    k a + delta = atan2(k sK, cK) and B = k / hypot(k sK, cK).
    """
    K = cmath.sqrt(complex(k * k - V0))
    sK = (cmath.sin(K * a) / K).real if abs(K) > 0 else a
    cK = cmath.cos(K * a).real
    delta = math.atan2(k * sK, cK) - k * a
    B = k / math.hypot(k * sK, cK)
    return RadialCoefficients(cmath.exp(1j * delta) / 2j, -cmath.exp(-1j * delta) / 2j, 0j, complex(B))


def radial_window_overlaps(s1: RadialState, s2: RadialState, lam, tol: float = 1e-13):
    """int_0^Lambda conj(phi_2) phi_1 dr for Lambda >= r_max (vectorised in Lambda)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < s1.r_max) or np.any(lam < s2.r_max):
        raise ValueError("Lambda must be beyond r_max")
    r0 = max(s1.r_max, s2.r_max)
    brk = tuple(sorted(set(s1._edges) | set(s2._edges)))
    core, _ = oscillatory_quad(lambda r: np.conj(s2(r)) * s1(r), 0.0, r0,
                               s1.k + s2.k, tol=tol, breakpoints=brk)
    k1, k2 = s1.k, s2.k
    tail = (np.conj(s2.T) * s1.T * exp_integral(k1 - k2, r0, lam)
            + np.conj(s2.R) * s1.R * exp_integral(k2 - k1, r0, lam)
            + np.conj(s2.T) * s1.R * exp_integral(-(k1 + k2), r0, lam)
            + np.conj(s2.R) * s1.T * exp_integral(k1 + k2, r0, lam))
    return core + tail


def radial_cesaro_extract(V, k1: float, k2: float, lambda0: float, r_max: float,
                          n_lambda: int = 2048) -> CesaroExtraction:
    """Windowed radial overlap <phi_k2|phi_k1> on [0, Lambda], averaged and fitted."""
    if lambda0 <= r_max:
        raise ValueError("lambda0 must exceed r_max")
    s1, s2 = RadialState(V, k1, r_max), RadialState(V, k2, r_max)
    return _extract(lambda lam: radial_window_overlaps(s1, s2, lam), k1, k2, lambda0, n_lambda)
