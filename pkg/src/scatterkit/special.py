"""Complex Gamma, the Airy function Ai and the linear-potential eigenstate.

Gamma uses the Lanczos approximation (g = 7, nine terms) in logarithmic form
with the reflection formula on Re z < 1/2.  Ai is summed from its Maclaurin
series on -7 < xi < 6 and from the large-argument expansions elsewhere; the
oscillatory integral definition is kept only as :func:`airy_ai_integral`, a
slow cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate


class GammaPoleError(ValueError):
    """Argument is a pole of Gamma (a nonpositive integer)."""


class ConvergenceError(RuntimeError):
    """A truncated integral did not settle as its window grew."""


_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _log_gamma_right(z: complex) -> complex:
    # valid for Re z >= 1/2
    z -= 1
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(s)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex z; relative accuracy about 1e-14 for |z| <= 50."""
    z = complex(z)
    if _is_pole(z):
        raise GammaPoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_log_gamma_right(1 - z)))
    return cmath.exp(_log_gamma_right(z))


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), entire; exactly zero at the poles of Gamma."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(math.pi * z) * cmath.exp(_log_gamma_right(1 - z)) / math.pi
    return cmath.exp(-_log_gamma_right(z))


# -- Airy ---------------------------------------------------------------------

_AI0 = 0.355028053887817239260063186004  # 3^{-2/3}/Gamma(2/3)
_AIP0 = 0.258819403792806798405183560189  # 3^{-1/3}/Gamma(1/3)
_SERIES_TERMS = 70
_ASYM_TERMS = 20
_SERIES_LO, _SERIES_HI = -7.0, 6.0


def _asym_coeffs(n: int) -> np.ndarray:
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    return u


_U = _asym_coeffs(_ASYM_TERMS)


def _ai_series(x: np.ndarray) -> np.ndarray:
    x3 = x**3
    f = np.ones_like(x)
    g = x.copy()
    tf = np.ones_like(x)
    tg = x.copy()
    for k in range(_SERIES_TERMS):
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        f += tf
        g += tg
    return _AI0 * f - _AIP0 * g


def _ai_pos(x: np.ndarray) -> np.ndarray:
    zeta = 2.0 / 3.0 * x**1.5
    s = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(_ASYM_TERMS):
        s += (-1) ** k * _U[k] * p
        p = p / zeta
    return np.exp(-zeta) / (2 * math.sqrt(math.pi) * x**0.25) * s


def _ai_neg(x: np.ndarray) -> np.ndarray:
    ax = -x
    zeta = 2.0 / 3.0 * ax**1.5
    even = np.zeros_like(ax)
    odd = np.zeros_like(ax)
    p = np.ones_like(ax)
    for k in range(_ASYM_TERMS):
        term = _U[k] * p
        sign = (-1) ** (k // 2)
        if k % 2 == 0:
            even += sign * term
        else:
            odd += sign * term
        p = p / zeta
    ph = zeta - math.pi / 4
    return (np.cos(ph) * even + np.sin(ph) * odd) / (math.sqrt(math.pi) * ax**0.25)


def airy_ai(xi):
    """Airy function Ai for real scalar or array input."""
    x = np.asarray(xi, dtype=float)
    out = np.empty_like(x)
    mid = (x > _SERIES_LO) & (x < _SERIES_HI)
    hi = x >= _SERIES_HI
    lo = x <= _SERIES_LO
    if mid.any():
        out[mid] = _ai_series(x[mid])
    if hi.any():
        out[hi] = _ai_pos(x[hi])
    if lo.any():
        out[lo] = _ai_neg(x[lo])
    return out[()] if out.ndim == 0 else out


def airy_ai_integral(xi: float) -> float:
    """Ai from (1/pi) int_0^inf cos(u^3/3 + xi u) du, by Fourier-weighted quadrature.

    Substituting w = u^3/3 + xi u past the last stationary point turns the tail
    into a cosine transform handled by QAWF.  Good to about 1e-8.
    """
    u0 = math.sqrt(max(-xi, 0.0)) + 3.0
    head, _ = integrate.quad(lambda u: math.cos(u**3 / 3 + xi * u), 0.0, u0, limit=400,
                             epsabs=1e-13, epsrel=1e-13)
    w0 = u0**3 / 3 + xi * u0

    def du_dw(w: float) -> float:
        # invert w = u^3/3 + xi u by Newton from a cube-root guess
        u = max(u0, (3 * abs(w)) ** (1 / 3))
        for _ in range(60):
            f = u**3 / 3 + xi * u - w
            du = f / (u * u + xi)
            u -= du
            if abs(du) < 1e-15 * u:
                break
        return 1.0 / (u * u + xi)

    # int_{w0}^inf cos(w) u'(w) dw = int_0^inf cos(s + w0) u'(s + w0) ds
    c, _ = integrate.quad(lambda s: du_dw(s + w0), 0, np.inf, weight="cos", wvar=1.0)
    s_, _ = integrate.quad(lambda s: du_dw(s + w0), 0, np.inf, weight="sin", wvar=1.0)
    tail = math.cos(w0) * c - math.sin(w0) * s_
    return (head + tail) / math.pi


@dataclass(frozen=True)
class LinearPotentialState:
    """Energy eigenstate of p^2/2m + m g z, phi(z) = Ai(z/c - xi1)."""

    E: float
    m: float = 1.0
    g: float = 1.0

    def __post_init__(self):
        if self.m <= 0 or self.g <= 0:
            raise ValueError("mass and field strength must be positive")

    @property
    def c(self) -> float:
        return (1.0 / (2 * self.m**2 * self.g)) ** (1.0 / 3.0)

    @property
    def xi1(self) -> float:
        # from substituting Ai(z/c - xi1) into the eigenvalue equation
        return self.E / (self.m * self.g * self.c)


def linear_state_eval(s: LinearPotentialState, z):
    return airy_ai(np.asarray(z, dtype=float) / s.c - s.xi1)


def _gauss(u, sigma):
    return np.exp(-0.5 * (u / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def _smeared_overlap_once(x: float, y: float, T: float, sigma: float) -> float:
    # inner: S(t) = int du Ai(t + y + u) G(u) by Gauss-Hermite
    hn, hw = np.polynomial.hermite.hermgauss(80)
    u = math.sqrt(2) * sigma * hn
    wu = hw / math.sqrt(math.pi)
    # outer: composite Gauss-Legendre on [-T, T], panels of width 0.25
    npan = max(1, int(math.ceil(2 * T / 0.25)))
    gn, gw = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(-T, T, npan + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mids[:, None] + half[:, None] * gn[None, :]).ravel()
    wt = (half[:, None] * gw[None, :]).ravel()
    s = airy_ai(t[:, None] + y + u[None, :]) @ wu
    return float(np.sum(wt * airy_ai(t + x) * s))


def airy_overlap_smeared(x: float, y: float, half_window: float = 40.0, sigma: float = 0.5,
                         tol: float = 1e-2) -> float:
    """int_{-T}^{T} dt int dy' Ai(t+x) Ai(t+y') G_sigma(y' - y).

    As T grows this tends to G_sigma(x - y).  Raises ConvergenceError when
    doubling T moves the result by more than ``tol``.
    """
    if half_window < 20:
        raise ValueError("half_window must be at least 20")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    val = _smeared_overlap_once(x, y, half_window, sigma)
    val2 = _smeared_overlap_once(x, y, 2 * half_window, sigma)
    if abs(val2 - val) > tol:
        raise ConvergenceError(
            f"smeared Airy overlap not settled: T={half_window} gives {val:.3e}, 2T gives {val2:.3e}")
    return val


def gaussian_target(d: float, sigma: float) -> float:
    return float(_gauss(d, sigma))
