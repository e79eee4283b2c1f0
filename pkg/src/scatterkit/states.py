"""Closed-form stationary scattering states.

Every state is normalised to a unit incoming wave from the left::

    phi_k(x) = e^{ikx} + R e^{-ikx}      (left of the potential)
    phi_k(x) = T e^{ikx}                 (right of the potential)

For the free, delta and square-well families the state is a finite sum of
exponentials on each segment (:func:`pieces`), which lets overlaps be
integrated exactly.  Sech^2 states come from a high-order ODE integration
matched to T e^{ikx} on the right.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from scatterkit.potentials import Family, Potential, PotentialError, sech2_cutoff
from scatterkit.special import GammaPoleError, complex_gamma, reciprocal_gamma


class StateError(ValueError):
    """Coefficients requested outside their domain of definition."""


@dataclass(frozen=True)
class ScatteringCoefficients:
    k: float
    R: complex
    T: complex
    k_in: complex = 0j
    A_plus: complex | None = None
    A_minus: complex | None = None
    D: complex | None = None
    cond: float | None = None

    @property
    def flux(self) -> float:
        return abs(self.R) ** 2 + abs(self.T) ** 2


@dataclass(frozen=True)
class MatchingResidual:
    value_jump_left: complex
    deriv_jump_left: complex
    value_jump_right: complex
    deriv_jump_right: complex

    def max_abs(self) -> float:
        return max(abs(self.value_jump_left), abs(self.deriv_jump_left),
                   abs(self.value_jump_right), abs(self.deriv_jump_right))


def _check_k(k: float) -> None:
    if not (k > 0 and math.isfinite(k)):
        raise StateError(f"wavenumber must be positive and finite, got {k!r}")


def inside_wavenumber(k: float, V0: float) -> complex:
    """sqrt(k^2 - 2 V0) on the principal branch (Im >= 0 below the barrier)."""
    return cmath.sqrt(complex(k * k - 2 * V0, 0.0))


def square_well_coefficients(k: float, p: Potential, strict_paper: bool = False) -> ScatteringCoefficients:
    """R, T, A+-, D for the square well V0 on (-a/2, a/2).

    With ``strict_paper=True`` the interior amplitudes are returned in the
    printed form ``(i k q / D)(1 +- k/q)``, which omits the phase factors
    ``e^{-ika/2} e^{-+iqa/2}`` and therefore fails the matching conditions.
    """
    _check_k(k)
    if p.family is not Family.SQUARE_WELL:
        raise PotentialError("square_well_coefficients needs a square well")
    a, V0 = p.width, p.strength
    q = inside_wavenumber(k, V0)
    if abs(q) < 1e-12 * k:
        raise StateError("interior wavenumber vanishes (E = V0); A+- are undefined")
    s, c = cmath.sin(q * a), cmath.cos(q * a)
    D = (k * k + q * q) * s + 2j * k * q * c
    ph = cmath.exp(-1j * k * a)
    R = ph * (k * k - q * q) * s / D
    T = ph * 2j * k * q / D
    if strict_paper:
        Ap = 1j * k * q / D * (1 + k / q)
        Am = 1j * k * q / D * (1 - k / q)
    else:
        h = cmath.exp(-0.5j * k * a)
        Ap = h * cmath.exp(-0.5j * q * a) * 1j * k * (q + k) / D
        Am = h * cmath.exp(0.5j * q * a) * 1j * k * (q - k) / D
    return ScatteringCoefficients(k, R, T, q, Ap, Am, D)


def solve_matching_system(k: float, p: Potential) -> ScatteringCoefficients:
    """Solve continuity of phi and phi' at x = -+a/2 for (R, A+, A-, T)."""
    _check_k(k)
    if p.family is not Family.SQUARE_WELL:
        raise PotentialError("solve_matching_system needs a square well")
    a, V0 = p.width, p.strength
    q = inside_wavenumber(k, V0)
    h = a / 2
    e = cmath.exp
    M = np.array([
        [-e(1j * k * h), e(-1j * q * h), e(1j * q * h), 0],
        [1j * k * e(1j * k * h), 1j * q * e(-1j * q * h), -1j * q * e(1j * q * h), 0],
        [0, e(1j * q * h), e(-1j * q * h), -e(1j * k * h)],
        [0, 1j * q * e(1j * q * h), -1j * q * e(-1j * q * h), -1j * k * e(1j * k * h)],
    ], dtype=complex)
    b = np.array([e(-1j * k * h), 1j * k * e(-1j * k * h), 0, 0], dtype=complex)
    cond = float(np.linalg.cond(M))
    if not math.isfinite(cond) or cond > 1e14:
        raise StateError(f"matching system is singular at k={k}")
    R, Ap, Am, T = np.linalg.solve(M, b)
    return ScatteringCoefficients(k, complex(R), complex(T), q, complex(Ap), complex(Am), None, cond)


def matching_residual(p: Potential, c: ScatteringCoefficients) -> MatchingResidual:
    h = p.width / 2
    k, q = c.k, c.k_in
    e = cmath.exp

    def inner(x):
        return (c.A_plus * e(1j * q * x) + c.A_minus * e(-1j * q * x),
                1j * q * (c.A_plus * e(1j * q * x) - c.A_minus * e(-1j * q * x)))

    lv = e(-1j * k * h) + c.R * e(1j * k * h)
    ld = 1j * k * (e(-1j * k * h) - c.R * e(1j * k * h))
    rv = c.T * e(1j * k * h)
    rd = 1j * k * rv
    iv_l, id_l = inner(-h)
    iv_r, id_r = inner(h)
    return MatchingResidual(lv - iv_l, ld - id_l, iv_r - rv, id_r - rd)


def delta_coefficients(k: float, g: float = -1.0) -> ScatteringCoefficients:
    """Coefficients for V = g delta(x); g = -1 gives R = i/(k-i), T = k/(k-i).

    From the jump phi'(0+) - phi'(0-) = 2 g phi(0).
    """
    _check_k(k)
    den = 1j * k - g
    return ScatteringCoefficients(k, g / den, 1j * k / den, complex(k))


def nu_from_strength(V0: float, mu: float = 1.0) -> complex:
    """nu with 2 V0 / mu^2 = -nu (nu + 1), on the branch with Re nu >= -1/2."""
    disc = 1.0 - 8.0 * V0 / mu**2
    r = cmath.sqrt(complex(disc, 0.0))
    nu = (-1 + r) / 2
    return complex(nu.real, nu.imag) if nu.imag else complex(nu.real)


def sech2_coefficients(k: float, nu: complex) -> ScatteringCoefficients:
    """Gamma-ratio R and T for V0/cosh^2 x (mu = 1, m = 1).

    Positive integer nu is reflectionless (1/Gamma(-nu) = 0).  nu = 0 is the
    free particle, where the ratio is degenerate and an error is raised.
    """
    _check_k(k)
    nu = complex(nu)
    if nu == 0:
        raise GammaPoleError("nu = 0 puts Gamma(-nu) at a pole; use the free family")
    ik = 1j * k
    common = complex_gamma(1 + nu - ik) * complex_gamma(-nu - ik) * reciprocal_gamma(-ik)
    T = common * reciprocal_gamma(1 - ik)
    R = common * complex_gamma(ik) * reciprocal_gamma(1 + nu) * reciprocal_gamma(-nu)
    return ScatteringCoefficients(k, R, T, complex(k))


def coefficients(p: Potential, k: float) -> ScatteringCoefficients:
    """Dispatch to the family's closed-form coefficients."""
    _check_k(k)
    f = p.family
    if f is Family.FREE:
        return ScatteringCoefficients(k, 0j, 1 + 0j, complex(k), 1 + 0j, 0j)
    if f is Family.DELTA:
        return delta_coefficients(k, p.strength)
    if f is Family.SQUARE_WELL:
        return square_well_coefficients(k, p)
    if f is Family.SECH2:
        mu = p.inverse_range
        if p.strength == 0:
            return ScatteringCoefficients(k, 0j, 1 + 0j, complex(k))
        return sech2_coefficients(k / mu, nu_from_strength(p.strength, mu))
    raise PotentialError(f"no scattering coefficients for the {f.value} family")


# -- piecewise exponential representation ----------------------------------

@dataclass(frozen=True)
class Segment:
    """phi(x) = sum_j amps[j] * exp(1j * waves[j] * x) on [lo, hi]."""

    lo: float
    hi: float
    amps: tuple[complex, ...]
    waves: tuple[complex, ...]


def pieces(p: Potential, c: ScatteringCoefficients) -> list[Segment]:
    k = c.k
    f = p.family
    inf = math.inf
    if f is Family.FREE:
        return [Segment(-inf, inf, (1 + 0j,), (complex(k),))]
    if f is Family.DELTA:
        return [Segment(-inf, 0.0, (1 + 0j, c.R), (complex(k), complex(-k))),
                Segment(0.0, inf, (c.T,), (complex(k),))]
    if f is Family.SQUARE_WELL:
        h = p.width / 2
        q = c.k_in
        return [Segment(-inf, -h, (1 + 0j, c.R), (complex(k), complex(-k))),
                Segment(-h, h, (c.A_plus, c.A_minus), (q, -q)),
                Segment(h, inf, (c.T,), (complex(k),))]
    raise PotentialError(f"{f.value} states are not piecewise exponential")


def asymptotic_pieces(c: ScatteringCoefficients) -> list[Segment]:
    """Left asymptotic form on x < 0 and right form on x > 0, extended to the origin."""
    k = complex(c.k)
    return [Segment(-math.inf, 0.0, (1 + 0j, c.R), (k, -k)),
            Segment(0.0, math.inf, (c.T,), (k,))]


def _eval_pieces(segs: list[Segment], x: np.ndarray, deriv: bool) -> np.ndarray:
    out = np.zeros(x.shape, dtype=complex)
    for i, s in enumerate(segs):
        last = i == len(segs) - 1
        m = (x >= s.lo) & ((x < s.hi) | (last & (x <= s.hi)))
        if not m.any():
            continue
        xs = x[m]
        v = np.zeros(xs.shape, dtype=complex)
        for amp, w in zip(s.amps, s.waves):
            term = amp * np.exp(1j * w * xs)
            v += 1j * w * term if deriv else term
        out[m] = v
    return out


# -- sech^2 states by ODE ----------------------------------------------------

class Sech2State:
    """Exact sech^2 state: integrated from T e^{ikx} at the right cutoff."""

    def __init__(self, p: Potential, k: float, rtol: float = 1e-12):
        self.p = p
        self.c = coefficients(p, k)
        self.k = k
        X = sech2_cutoff(p)
        self.X = X
        V0, mu = p.strength, p.inverse_range

        def rhs(x, y):
            e = math.exp(-2 * abs(mu * x))
            v = V0 * 4 * e / (1 + e) ** 2
            return [y[1], 2 * (v - 0.5 * k * k) * y[0]]

        T = self.c.T
        y0 = np.array([T * cmath.exp(1j * k * X), 1j * k * T * cmath.exp(1j * k * X)], dtype=complex)
        sol = solve_ivp(rhs, [X, -X], y0, method="DOP853", rtol=rtol, atol=1e-14 * max(abs(T), 1e-3),
                        dense_output=True)
        if not sol.success:
            raise StateError(f"sech2 integration failed: {sol.message}")
        self._sol = sol.sol
        self._asym = asymptotic_pieces(self.c)

    def __call__(self, x, deriv: bool = False) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.empty(flat.shape, dtype=complex)
        inside = np.abs(flat) <= self.X
        if inside.any():
            out[inside] = self._sol(flat[inside])[1 if deriv else 0]
        if (~inside).any():
            out[~inside] = _eval_pieces(self._asym, flat[~inside], deriv)
        return out.reshape(x.shape)


@functools.lru_cache(maxsize=512)
def sech2_state(p: Potential, k: float) -> Sech2State:
    return Sech2State(p, k)


def eval_wavefunction(p: Potential, c: ScatteringCoefficients, x, deriv: bool = False):
    """phi_k(x) (or phi_k'(x) with ``deriv=True``) for scalar or array x."""
    xa = np.asarray(x, dtype=float)
    if p.family is Family.SECH2:
        out = sech2_state(p, c.k)(xa, deriv)
    elif p.family in (Family.FREE, Family.DELTA, Family.SQUARE_WELL):
        out = _eval_pieces(pieces(p, c), xa.ravel(), deriv).reshape(xa.shape)
    else:
        raise PotentialError(f"eval_wavefunction does not handle {p.family.value}")
    return out[()] if out.ndim == 0 else out


def boundary_modulus_difference(k: float, p: Potential) -> float:
    """|phi(-a/2)|^2 - |phi(a/2)|^2, evaluated directly.

    :func:`boundary_modulus_closed_form` gives 4k^2 (k^2 - q^2) sin^2(qa) / |D|^2.
    """
    c = square_well_coefficients(k, p)
    h = p.width / 2
    left = abs(eval_wavefunction(p, c, -h)) ** 2
    right = abs(eval_wavefunction(p, c, h)) ** 2
    return float(left - right)


def boundary_modulus_closed_form(k: float, p: Potential) -> float:
    c = square_well_coefficients(k, p)
    q = c.k_in
    val = 4 * k * k * (k * k - q * q) * cmath.sin(q * p.width) ** 2 / abs(c.D) ** 2
    return float(val.real)
