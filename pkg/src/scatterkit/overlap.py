"""Scalar products of scattering states on finite windows and with damping.

All overlaps here are ``<phi_k1 | phi_k2> = int conj(phi_k1) phi_k2 dx``.

Three routes are provided:

* :func:`overlap_window` integrates exactly over a finite window using the
  per-segment exponential antiderivatives (sech^2 states fall back to panel
  quadrature inside the potential and exact tails outside).
* :func:`overlap_from_boundary` uses the Wronskian boundary current
  ``J = [conj(phi_1') phi_2 - conj(phi_1) phi_2']`` and
  ``int conj(phi_1) phi_2 = -J / (2 (E1 - E2))``.
* :func:`regularized_overlap` damps both states by ``e^{-eps|x|/2}`` (product
  weight ``e^{-eps|x|}``) and splits the result into delta-function
  coefficients and a finite remainder.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from scatterkit.potentials import Family, Potential, PotentialError, sech2_cutoff
from scatterkit.quadrature import oscillatory_quad
from scatterkit.states import (
    ScatteringCoefficients,
    Segment,
    asymptotic_pieces,
    coefficients,
    eval_wavefunction,
    pieces,
)


class DegenerateMomentaError(ValueError):
    """k1 = +-k2 where a formula divides by E(k1) - E(k2)."""


class WindowError(ValueError):
    """Window does not satisfy the operation's preconditions."""


class Method(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    BOUNDARY_REDUCED = "BoundaryReduced"
    REGULARIZED = "Regularized"
    ORACLE = "Oracle"


@dataclass(frozen=True)
class WindowSpec:
    x1: float
    x2: float

    def __post_init__(self):
        if not self.x1 < self.x2:
            raise WindowError(f"window needs x1 < x2, got [{self.x1}, {self.x2}]")

    @classmethod
    def symmetric(cls, half_width: float) -> "WindowSpec":
        return cls(-half_width, half_width)

    @classmethod
    def anchored(cls, x0: float, length: float) -> "WindowSpec":
        """Window [x0, x0 + L]."""
        return cls(x0, x0 + length)

    def brackets(self, lo: float, hi: float) -> bool:
        return self.x1 < lo and hi < self.x2


@dataclass(frozen=True)
class OverlapDecomposition:
    """<phi_k1|phi_k2> = delta_km_coeff 2 pi delta(k1-k2) + delta_kp_coeff pi delta(k1+k2) + finite_remainder."""

    delta_km_coeff: complex
    delta_kp_coeff: complex
    finite_remainder: complex
    method: Method
    extras: dict = field(default_factory=dict, compare=False)


def _csinc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1 - z2 / 6 + z2 * z2 / 120, np.sin(zs) / zs)


def exp_integral(s, lo, hi):
    """int_lo^hi e^{i s x} dx for finite lo, hi; exact at s = 0."""
    s = np.asarray(s, dtype=complex)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    return np.exp(1j * s * c) * 2 * h * _csinc(s * h)


def _pair_terms(s1: Segment, s2: Segment):
    for a1, w1 in zip(s1.amps, s1.waves):
        for a2, w2 in zip(s2.amps, s2.waves):
            yield np.conj(a1) * a2, w2 - np.conj(w1)


def segments_overlap(segs1: list[Segment], segs2: list[Segment], x1, x2):
    """int_{x1}^{x2} conj(phi_1) phi_2 for piecewise exponential states.

    ``x1``/``x2`` may be arrays (broadcast together).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    total = np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
    for s1 in segs1:
        for s2 in segs2:
            lo = np.maximum(np.maximum(s1.lo, s2.lo), x1)
            hi = np.minimum(np.minimum(s1.hi, s2.hi), x2)
            ok = hi > lo
            if not np.any(ok):
                continue
            lo_ = np.where(ok, lo, 0.0)
            hi_ = np.where(ok, hi, 0.0)
            for amp, s in _pair_terms(s1, s2):
                total += np.where(ok, amp * exp_integral(s, lo_, hi_), 0.0)
    return total


def _check_window(p: Potential, w: WindowSpec) -> None:
    if p.family is Family.SQUARE_WELL and not w.brackets(-p.width / 2, p.width / 2):
        raise WindowError(f"window [{w.x1}, {w.x2}] must bracket the well (-{p.width / 2}, {p.width / 2})")


def _coeffs(p, k, c):
    return c if c is not None else coefficients(p, k)


def window_overlaps(p: Potential, k1: float, k2: float, x1, x2, c1=None, c2=None):
    """Vectorised exact window overlaps (arrays of endpoints outside the potential for sech2)."""
    c1, c2 = _coeffs(p, k1, c1), _coeffs(p, k2, c2)
    if p.family is Family.SECH2:
        X = sech2_cutoff(p)
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if np.any(x1 > -X) or np.any(x2 < X):
            raise WindowError("vectorised sech2 overlaps need windows beyond the cutoff")
        core = _sech2_core(p, k1, k2, -X, X)
        asym1, asym2 = asymptotic_pieces(c1), asymptotic_pieces(c2)
        left = segments_overlap(asym1, asym2, x1, -X)
        right = segments_overlap(asym1, asym2, X, x2)
        return core + left + right
    return segments_overlap(pieces(p, c1), pieces(p, c2), x1, x2)


def _sech2_core(p: Potential, k1: float, k2: float, lo: float, hi: float, tol: float = 1e-13) -> complex:
    c1, c2 = coefficients(p, k1), coefficients(p, k2)

    def f(x):
        return np.conj(eval_wavefunction(p, c1, x)) * eval_wavefunction(p, c2, x)

    val, _ = oscillatory_quad(f, lo, hi, k1 + k2, tol=tol)
    return val


def overlap_window(p: Potential, k1: float, k2: float, w: WindowSpec,
                   c1: ScatteringCoefficients | None = None,
                   c2: ScatteringCoefficients | None = None) -> complex:
    """int_{x1}^{x2} conj(phi_k1) phi_k2 dx, exact for piecewise exponential states."""
    if not (k1 > 0 and k2 > 0):
        raise ValueError("wavenumbers must be positive")
    _check_window(p, w)
    if p.family is Family.SECH2:
        X = sech2_cutoff(p)
        lo, hi = max(w.x1, -X), min(w.x2, X)
        val = _sech2_core(p, k1, k2, lo, hi) if hi > lo else 0j
        c1, c2 = _coeffs(p, k1, c1), _coeffs(p, k2, c2)
        a1, a2 = asymptotic_pieces(c1), asymptotic_pieces(c2)
        if w.x1 < -X:
            val += complex(segments_overlap(a1, a2, w.x1, min(-X, w.x2)))
        if w.x2 > X:
            val += complex(segments_overlap(a1, a2, max(X, w.x1), w.x2))
        return val
    return complex(window_overlaps(p, k1, k2, w.x1, w.x2, c1, c2))


def _wronskian(p, c1, c2, x):
    f1 = eval_wavefunction(p, c1, x)
    d1 = eval_wavefunction(p, c1, x, deriv=True)
    f2 = eval_wavefunction(p, c2, x)
    d2 = eval_wavefunction(p, c2, x, deriv=True)
    return np.conj(d1) * f2 - np.conj(f1) * d2


def boundary_current_J(p: Potential, k1: float, k2: float, w: WindowSpec,
                       c1=None, c2=None) -> complex:
    """[conj(phi_1') phi_2 - conj(phi_1) phi_2'] evaluated between x1 and x2."""
    c1, c2 = _coeffs(p, k1, c1), _coeffs(p, k2, c2)
    if k1 == k2 and c1 == c2:
        return 0j
    return complex(_wronskian(p, c1, c2, w.x2) - _wronskian(p, c1, c2, w.x1))


def _check_distinct(k1: float, k2: float) -> None:
    if abs(k1 * k1 - k2 * k2) <= 1e-13 * max(k1 * k1, k2 * k2):
        raise DegenerateMomentaError(f"k1 = +-k2 ({k1}, {k2}): energies coincide")


def overlap_from_boundary(p: Potential, k1: float, k2: float, w: WindowSpec,
                          c1=None, c2=None) -> complex:
    """-J / (2 (E1 - E2)) with E = k^2/2."""
    _check_distinct(k1, k2)
    _check_window(p, w)
    return -boundary_current_J(p, k1, k2, w, c1, c2) / (k1 * k1 - k2 * k2)


def window_kernel(dk: float, x0: float, L: float) -> complex:
    """(e^{i dk (x0+L)} - e^{i dk x0}) / (i dk), equal to L at dk = 0."""
    if L <= 0:
        raise ValueError("L must be positive")
    return complex(exp_integral(dk, x0, x0 + L))


# -- exponential regularisation -------------------------------------------

def _damped_integral(s: complex, lo: float, hi: float, eps: float) -> complex:
    """int_lo^hi e^{i s x - eps|x|} dx on a segment not straddling 0."""
    sign = 1.0 if lo >= 0 else -1.0
    z = 1j * s - eps * sign
    if math.isinf(lo) or math.isinf(hi):
        if eps == 0:
            # Abel limit of the half-line term; the delta part is collected separately
            end = hi if math.isinf(lo) else lo
            val = np.exp(z * end) / z
            return complex(val if math.isinf(lo) else -val)
        if math.isinf(lo):
            return complex(np.exp(z * hi) / z)
        return complex(-np.exp(z * lo) / z)
    if eps == 0:
        return complex(exp_integral(s, lo, hi))
    return complex((np.exp(z * hi) - np.exp(z * lo)) / z)


def _split_at_zero(segs: list[Segment]) -> list[Segment]:
    out = []
    for s in segs:
        if s.lo < 0 < s.hi:
            out.append(Segment(s.lo, 0.0, s.amps, s.waves))
            out.append(Segment(0.0, s.hi, s.amps, s.waves))
        else:
            out.append(s)
    return out


def _regularized_value(segs1, segs2, eps: float) -> complex:
    total = 0j
    for s1 in _split_at_zero(segs1):
        for s2 in _split_at_zero(segs2):
            lo, hi = max(s1.lo, s2.lo), min(s1.hi, s2.hi)
            if not hi > lo:
                continue
            for amp, s in _pair_terms(s1, s2):
                total += amp * _damped_integral(s, lo, hi, eps)
    return total


def regularized_overlap(p: Potential, k1: float, k2: float, eps: float = 1e-2) -> OverlapDecomposition:
    """Decompose the damped overlap into delta coefficients and a finite remainder.

    The damped integral is a rational function of eps, so its eps -> 0 limit at
    k1 != +-k2 is obtained by substitution; the values at eps, eps/10, eps/100
    and their linear Richardson extrapolation are kept in ``extras``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if p.family not in (Family.FREE, Family.DELTA, Family.SQUARE_WELL):
        raise PotentialError("regularized_overlap supports free, delta and square-well states")
    if abs(k1 - k2) <= 1e-12 * max(k1, k2):
        raise DegenerateMomentaError("finite remainder is defined only for k1 != k2")
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    s1, s2 = pieces(p, c1), pieces(p, c2)
    ladder = [eps, eps / 10, eps / 100]
    vals = [_regularized_value(s1, s2, e) for e in ladder]
    rich = (10 * vals[2] - vals[1]) / 9
    limit = _regularized_value(s1, s2, 0.0)
    km = (1 + np.conj(c1.T) * c2.T + np.conj(c1.R) * c2.R) / 2
    kp = c2.R + np.conj(c1.R)
    return OverlapDecomposition(complex(km), complex(kp), complex(limit), Method.REGULARIZED,
                                {"eps": ladder, "values": vals, "richardson": complex(rich)})


def regularized_remainder_formula(c1: ScatteringCoefficients, c2: ScatteringCoefficients) -> complex:
    """Principal-value remainder for states joined at the origin (free, delta).

    i P/(k1-k2) (1 - T1* T2 - R1* R2) + i P/(k1+k2) (R2 - R1*).
    """
    k1, k2 = c1.k, c2.k
    _check_distinct(k1, k2)
    a = 1 - np.conj(c1.T) * c2.T - np.conj(c1.R) * c2.R
    b = c2.R - np.conj(c1.R)
    return complex(1j * a / (k1 - k2) + 1j * b / (k1 + k2))
