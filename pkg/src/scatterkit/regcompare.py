"""Finite-window versus exponentially damped integrals of plane-wave products.

With omega = k1 - k2,

* I1(x1, x2) = int_{x1}^{x2} e^{i omega x} dx (sharp window), and
* I2(x1, x2) = int_{x1}^{x2} e^{i (omega + 2 i eps) x} dx (states damped as e^{-eps x}).

Both tend to delta functions of omega; their finite parts differ.  The
boundary-current reduction holds for the damped free wave but not for a
damped superposition of incident and reflected waves.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, special

from scatterkit.overlap import WindowSpec, exp_integral
from scatterkit.potentials import Family, Potential, PotentialError
from scatterkit.quadrature import oscillatory_quad
from scatterkit.states import coefficients


def I1_closed(x1: float, x2: float, k1: float, k2: float) -> complex:
    """(e^{i w x2} - e^{i w x1}) / (i w), w = k1 - k2; x2 - x1 at w = 0."""
    return complex(exp_integral(k1 - k2, x1, x2))


def I2_closed(x1: float, x2: float, k1: float, k2: float, eps: float) -> complex:
    """(e^{i z x2} - e^{i z x1}) / (i z) with z = k1 - k2 + 2 i eps; x2 may be +inf."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    z = k1 - k2 + 2j * eps
    if math.isinf(x2):
        return complex(1j * np.exp(1j * z * x1) / z)
    return complex(exp_integral(z, x1, x2))


# -- boundary reduction of damped states -----------------------------------

def _exp_int_general(z: complex, lo: float, hi: float) -> complex:
    """int_lo^hi e^{z x} dx, allowing infinite ends where Re(z x) -> -inf."""
    if z == 0:
        return complex(hi - lo)
    top = 0j if math.isinf(hi) else np.exp(z * hi)
    bot = 0j if math.isinf(lo) else np.exp(z * lo)
    return complex((top - bot) / z)


class _ExpSum:
    """f(x) = sum_j c_j e^{z_j x}."""

    def __init__(self, terms):
        self.terms = [(complex(c), complex(z)) for c, z in terms]

    def __call__(self, x):
        if math.isinf(x):
            return 0j
        return sum(c * np.exp(z * x) for c, z in self.terms)

    def deriv(self) -> "_ExpSum":
        return _ExpSum([(c * z, z) for c, z in self.terms])

    def conj(self) -> "_ExpSum":
        return _ExpSum([(np.conj(c), np.conj(z)) for c, z in self.terms])

    def integral_with(self, other: "_ExpSum", lo: float, hi: float) -> complex:
        """int_lo^hi self(x) other(x) dx."""
        return sum(c1 * c2 * _exp_int_general(z1 + z2, lo, hi)
                   for c1, z1 in self.terms for c2, z2 in other.terms)


def damped_free_wave(k: float, eps: float) -> _ExpSum:
    """e^{i (k + i eps) x}, an eigenfunction with E = (k + i eps)^2 / 2."""
    return _ExpSum([(1.0, 1j * (k + 1j * eps))])


def damped_left_wave(R: complex, k: float, eps: float) -> _ExpSum:
    """(e^{ikx} + R e^{-ikx}) e^{eps x}, the incident plus reflected wave damped towards x -> -inf."""
    return _ExpSum([(1.0, 1j * k + eps), (R, -1j * k + eps)])


def _residual(f1: _ExpSum, f2: _ExpSum, E1c: complex, E2: complex, lo: float, hi: float) -> complex:
    g1, d1, d2 = f1.conj(), f1.deriv().conj(), f2.deriv()
    overlap = g1.integral_with(f2, lo, hi)

    def W(x):
        return d1(x) * f2(x) - g1(x) * d2(x)

    return complex(2 * (E1c - E2) * overlap + W(hi) - W(lo))


def boundary_reduction_residual(p: Potential, k1: float, k2: float, eps: float, w: WindowSpec) -> complex:
    """2 (E1* - E2) int conj(psi_1) psi_2 + [conj(psi_1') psi_2 - conj(psi_1) psi_2'] over the window.

    Free: psi = e^{i(k + i eps)x} with E = (k + i eps)^2/2, x2 may be +inf.
    Square well: the damped left-region superposition with E = k^2/2; the
    window must lie left of the well (x1 may be -inf).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if p.family is Family.FREE:
        if math.isinf(w.x1):
            raise ValueError("damped free waves diverge at -inf")
        f1, f2 = damped_free_wave(k1, eps), damped_free_wave(k2, eps)
        E1c = np.conj((k1 + 1j * eps) ** 2 / 2)
        E2 = (k2 + 1j * eps) ** 2 / 2
        return _residual(f1, f2, E1c, E2, w.x1, w.x2)
    if p.family is Family.SQUARE_WELL:
        if w.x2 > -p.width / 2 or math.isinf(w.x2):
            raise ValueError("window must lie in the left region x <= -a/2")
        c1, c2 = coefficients(p, k1), coefficients(p, k2)
        f1, f2 = damped_left_wave(c1.R, k1, eps), damped_left_wave(c2.R, k2, eps)
        return _residual(f1, f2, k1 * k1 / 2, k2 * k2 / 2, w.x1, w.x2)
    raise PotentialError("boundary_reduction_residual supports free and square-well states")


def left_region_residual_formula(R1: complex, R2: complex, k1: float, k2: float, eps: float,
                                 x1: float, x2: float) -> complex:
    """-2 i eps int (k1 conj(u1) psi2 + k2 conj(psi1) u2) with u = (e^{ikx} - R e^{-ikx}) e^{eps x}."""
    psi1, psi2 = damped_left_wave(R1, k1, eps), damped_left_wave(R2, k2, eps)
    u1, u2 = damped_left_wave(-R1, k1, eps), damped_left_wave(-R2, k2, eps)
    val = k1 * u1.conj().integral_with(psi2, x1, x2) + k2 * psi1.conj().integral_with(u2, x1, x2)
    return complex(-2j * eps * val)


@dataclass(frozen=True)
class ScalingFit:
    eps: np.ndarray
    residuals: np.ndarray
    slope: float
    intercept: float
    r_squared: float
    loglog_slope: float


def residual_scaling(p: Potential, k1: float, k2: float, w: WindowSpec,
                     eps_values=None) -> ScalingFit:
    """Linear least-squares fit of |residual| against eps."""
    eps = np.asarray(eps_values if eps_values is not None else np.logspace(-5, -2, 7), dtype=float)
    res = np.array([abs(boundary_reduction_residual(p, k1, k2, e, w)) for e in eps])
    slope, intercept = np.polyfit(eps, res, 1)
    pred = slope * eps + intercept
    ss_res = float(np.sum((res - pred) ** 2))
    ss_tot = float(np.sum((res - res.mean()) ** 2))
    r2 = 1 - ss_res / ss_tot if ss_tot > 0 else 1.0
    ll = np.polyfit(np.log(eps), np.log(np.maximum(res, 1e-300)), 1)[0]
    return ScalingFit(eps, res, float(slope), float(intercept), float(r2), float(ll))


# -- delta-sequence comparisons --------------------------------------------

def lorentzian_modulus(omega, eps):
    """|I2(0, inf)|^2 = 1 / (omega^2 + 4 eps^2)."""
    return 1.0 / (np.asarray(omega) ** 2 + 4 * eps * eps)


def lorentzian_integral_oracle(eps: float) -> float:
    """int |I2(0, inf)|^2 d omega by adaptive quadrature (exact value pi / (2 eps))."""
    f = lambda w: abs(I2_closed(0.0, math.inf, w, 0.0, eps)) ** 2
    parts = [integrate.quad(f, -np.inf, -100 * eps, epsabs=0, epsrel=1e-12, limit=500)[0],
             integrate.quad(f, -100 * eps, 100 * eps, points=[0.0], epsabs=0, epsrel=1e-12, limit=500)[0],
             integrate.quad(f, 100 * eps, np.inf, epsabs=0, epsrel=1e-12, limit=500)[0]]
    return float(sum(parts))


def window_normalization_oracle(length: float, cutoff_periods: int = 200) -> float:
    """int d omega |I1(L, L + length)|^2 = int 4 sin^2(omega length / 2) / omega^2.

    Panel quadrature on |omega| < W plus the exact tail beyond W through
    the sine integral Si.
    The result is 2 pi length.
    """
    W = cutoff_periods * 2 * math.pi / length
    f = lambda w: 4 * np.sin(w * length / 2) ** 2 / np.where(w == 0, 1.0, w * w) * (w != 0) \
        + (w == 0) * length * length
    core, _ = oscillatory_quad(lambda w: f(w).astype(complex), 0.0, W, length, tol=1e-12 * length)
    si, _ = special.sici(length * W)
    # int_W^inf 2 (1 - cos(length w)) / w^2 dw
    tail_cos = math.cos(length * W) / W - length * (math.pi / 2 - si)
    tail = 2 / W - 2 * tail_cos
    return float(2 * (core.real + tail))


@dataclass(frozen=True)
class SmearedComparison:
    sigma: float
    target: float
    lambdas: np.ndarray
    window_values: np.ndarray
    eps_values: np.ndarray
    damped_values: np.ndarray

    @property
    def window_error(self) -> float:
        return float(abs(self.window_values[-1] - self.target))

    @property
    def damped_error(self) -> float:
        return float(abs(self.damped_values[-1] - self.target))

    def match(self, tol: float = 1e-4) -> bool:
        return self.window_error <= tol and self.damped_error <= tol


def smeared_comparison(sigma: float = 1.0, lambdas=(10.0, 30.0, 100.0),
                       eps_values=(1e-3, 1e-4, 1e-5, 1e-6)) -> SmearedComparison:
    """Smear both delta sequences with g(w) = exp(-w^2 / (2 sigma^2)).

    Two-sided window: int g(w) 2 sin(w Lambda)/w dw.  Two-sided damping:
    int g(w) 4 eps / (w^2 + 4 eps^2) dw.  Both tend to 2 pi g(0) = 2 pi.
    Integrals are done numerically on [-12 sigma, 12 sigma].
    """
    g = lambda w: np.exp(-w * w / (2 * sigma * sigma))
    lim = 12 * sigma
    win = []
    for lam in lambdas:
        f = lambda w, lam=lam: (g(w) * 2 * lam * np.sinc(w * lam / np.pi)).astype(complex)
        v, _ = oscillatory_quad(f, -lim, lim, lam, tol=1e-12)
        win.append(v.real)
    damp = []
    for e in eps_values:
        f = lambda w, e=e: g(w) * 4 * e / (w * w + 4 * e * e)
        pts = sorted({0.0, *[s * m * e for s in (-1, 1) for m in (1, 10, 100, 1000)]})
        pts = [x for x in pts if -lim < x < lim]
        v = 0.0
        for lo, hi in zip([-lim] + pts, pts + [lim]):
            v += integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
        damp.append(v)
    return SmearedComparison(sigma, 2 * math.pi, np.array(lambdas), np.array(win),
                             np.array(eps_values), np.array(damp))


def next_order_difference(k1: float, k2: float, eps: float) -> complex:
    """Finite part of I2(0, inf) minus that of I1(0, Lambda) at k1 != k2.

    I1(0, Lambda) = e^{i w Lambda}/(i w) - 1/(i w); replacing e^{i w Lambda}/(i w)
    by 2 pi delta(w) + 1/(i w) leaves no finite part.  I2(0, inf) = i/(w + 2 i eps).
    """
    if k1 == k2:
        raise ValueError("finite parts are compared at k1 != k2")
    return I2_closed(0.0, math.inf, k1, k2, eps) - 0.0


@dataclass(frozen=True)
class RegComparisonReport:
    k1: float
    k2: float
    eps: float
    I1: complex
    I2: complex
    leading_delta_match: bool
    next_order_difference: complex
    boundary_residual: complex
    free_boundary_residual: complex
    window_norm_oracle: float
    window_norm_paper: float

    def to_dict(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            out[key] = {"re": val.real, "im": val.imag} if isinstance(val, complex) else val
        return out


def regcompare(p: Potential, k1: float, k2: float, eps: float = 1e-3, L: float = 0.0,
               length: float = 50.0) -> RegComparisonReport:
    """Assemble the comparison at one momentum pair.

    I1 is on [L, L + length], I2 on [L, inf).  The square-well residual uses
    the left region (-inf, -a/2]; the free residual uses [L, inf).
    """
    sm = smeared_comparison()
    free = Potential(Family.FREE)
    free_res = boundary_reduction_residual(free, k1, k2, eps, WindowSpec(L, math.inf))
    if p.family is Family.SQUARE_WELL:
        res = boundary_reduction_residual(p, k1, k2, eps, WindowSpec(-math.inf, -p.width / 2))
    else:
        res = free_res
    return RegComparisonReport(
        k1, k2, eps,
        I1_closed(L, L + length, k1, k2),
        I2_closed(L, math.inf, k1, k2, eps),
        sm.match(),
        next_order_difference(k1, k2, eps),
        res, free_res,
        window_normalization_oracle(length),
        math.pi * length,
    )
