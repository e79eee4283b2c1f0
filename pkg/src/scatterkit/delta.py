"""The finite non-orthogonality term Delta(k1, k2) of two scattering states.

Delta(k1, k2) is defined in the orientation <phi_k2|phi_k1>.  From the
asymptotic coefficients alone,

    Delta = i ((T2* T1 - 1) + R2* R1) / (k1 - k2) + i (R1 - R2*) / (k1 + k2).

It equals minus the compactly supported integral
int (conj(phi_k2) phi_k1 - conj(chi_k2) chi_k1) dx, where chi is the
asymptotic form of each state continued up to the origin.  That identity
gives the square-well closed form used here.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from scatterkit.overlap import DegenerateMomentaError, segments_overlap
from scatterkit.potentials import Family, Potential, PotentialError, sech2_cutoff
from scatterkit.states import asymptotic_pieces, coefficients, inside_wavenumber, pieces

TRANSPARENCY_TOL = 1e-8


def _check_pair(k1: float, k2: float) -> None:
    if not (k1 > 0 and k2 > 0):
        raise ValueError("wavenumbers must be positive")
    if abs(k1 - k2) <= 1e-13 * max(k1, k2):
        raise DegenerateMomentaError(f"k1 = k2 = {k1}")


def delta_term_1d(R1: complex, T1: complex, R2: complex, T2: complex, k1: float, k2: float) -> complex:
    """Delta from reflection/transmission amplitudes (R1, T1 at k1; R2, T2 at k2)."""
    _check_pair(k1, k2)
    R2c, T2c = np.conj(R2), np.conj(T2)
    return complex(1j * ((T2c * T1 - 1) + R2c * R1) / (k1 - k2) + 1j * (R1 - R2c) / (k1 + k2))


def transparency_order(k: float, V0: float, a: float) -> int:
    """n with q a = n pi, q = sqrt(k^2 - 2 V0); raises if k is not a transparency point."""
    q = inside_wavenumber(k, V0)
    if abs(q.imag) > 0 or q.real == 0:
        raise ValueError(f"k={k} has no real interior wavenumber")
    n = round(q.real * a / math.pi)
    if n < 1 or abs(q.real * a - n * math.pi) > TRANSPARENCY_TOL:
        raise ValueError(f"k={k} is not at transparency (q a / pi = {q.real * a / math.pi!r})")
    return n


def transparency_momentum(n: int, V0: float, a: float) -> float:
    return math.sqrt((n * math.pi / a) ** 2 + 2 * V0)


def delta_term_transparency(k1: float, k2: float, a: float, V0: float,
                            strict_paper: bool = False) -> complex:
    """Delta for two square-well transparency momenta (R = 0).

    At q a = n pi the transmission amplitude is T = (-1)^n e^{-i k a}, so
    Delta = i ((-1)^(n1+n2) e^{i (k2-k1) a} - 1) / (k1 - k2).
    ``strict_paper`` returns i (e^{i (k1-k2) a} - 1) / (k1 - k2), which
    assumes T = e^{i k a}.
    """
    n1, n2 = transparency_order(k1, V0, a), transparency_order(k2, V0, a)
    _check_pair(k1, k2)
    if strict_paper:
        return complex(1j * (np.exp(1j * (k1 - k2) * a) - 1) / (k1 - k2))
    sign = -1.0 if (n1 + n2) % 2 else 1.0
    return complex(1j * (sign * np.exp(1j * (k2 - k1) * a) - 1) / (k1 - k2))


def _square_well_printed(k: float, kp: float, V0: float, a: float) -> complex:
    def parts(x):
        q = inside_wavenumber(x, V0)
        D = (x * x + q * q) * np.sin(q * a) + 2j * x * q * np.cos(q * a)
        return q, D

    q, D = parts(k)
    qp, Dp = parts(kp)
    Dc = np.conj(Dp)
    b1 = (1 / (Dc * D)) * (
        (1 / 1j) * np.exp(-1j * (k - kp) * a / 2) / (k - kp)
        * (Dc * D - (kp ** 2 - qp ** 2) * np.sin(qp * a) * (k * k - q * q) * np.sin(q * a) - 4 * kp * qp * k * q)
        + 2 * np.sin((q - qp) * a / 2) / (q - qp) * k * kp * (qp * k + kp * q))
    b2 = (1 / 1j) * (-1 / (k + kp)) * 2 * V0 * np.exp(1j * (kp - k) * a / 2) / (D * Dc) * (
        2 * (kp ** 2 - k ** 2) * np.sin(q * a) * np.sin(qp * a)
        - 2j * kp * qp * np.cos(qp * a) * np.sin(q * a) - 2j * k * q * np.cos(q * a) * np.sin(qp * a))
    b3 = (1 / (Dc * D)) * np.exp(1j * (kp + qp - k - q) * a / 2) * 2 * (kp * qp * k * q - kp ** 2 * k ** 2) \
        * (1 / (1j * (q + qp))) * (np.exp(1j * (q + qp) * a / 2) - np.exp(-1j * (q + qp) * a / 2))
    return complex(b1 + b2 + b3)


def delta_term_square_well(k1: float, k2: float, p: Potential, strict_paper: bool = False) -> complex:
    """Square-well Delta built from the interior solution.

    Computes -int_{-a/2}^{a/2} (conj(phi_k2) phi_k1 - conj(chi_k2) chi_k1) dx
    by exact exponential integrals over the well and its two halves.
    ``strict_paper`` evaluates the published three-block expression verbatim
    instead; it does not agree with the other routes (see the decisions log).
    """
    if p.family is not Family.SQUARE_WELL:
        raise PotentialError("delta_term_square_well needs a square well")
    _check_pair(k1, k2)
    if strict_paper:
        return _square_well_printed(k1, k2, p.strength, p.width)
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    h = p.width / 2
    inner = segments_overlap(pieces(p, c2), pieces(p, c1), -h, h)
    asym = segments_overlap(asymptotic_pieces(c2), asymptotic_pieces(c1), -h, h)
    return complex(-(inner - asym))


def delta_term_radial(T1, R1, T2, R2, phi0_1, dphi0_1, phi0_2, dphi0_2, k1: float, k2: float) -> complex:
    """Radial (m = 1/2, E = k^2) Delta for states T e^{ikr} + R e^{-ikr}.

    [-i(k1+k2)(T2* T1 - R2* R1) + i(k1-k2)(T2* R1 - R2* T1)
     - (phi2(0)* (-phi1'(0)) - phi1(0) (-phi2'(0)*))] / (k1^2 - k2^2)
    """
    if not (k1 > 0 and k2 > 0):
        raise ValueError("wavenumbers must be positive")
    if abs(k1 * k1 - k2 * k2) <= 1e-13 * max(k1 * k1, k2 * k2):
        raise DegenerateMomentaError("k1 = +-k2")
    T2c, R2c = np.conj(T2), np.conj(R2)
    wall = np.conj(phi0_2) * (-dphi0_1) - phi0_1 * (-np.conj(dphi0_2))
    num = (-1j * (k1 + k2) * (T2c * T1 - R2c * R1)
           + 1j * (k1 - k2) * (T2c * R1 - R2c * T1)
           - wall)
    return complex(num / (k1 * k1 - k2 * k2))


@dataclass(frozen=True)
class DeltaTermReport:
    """Delta(k1, k2) by several routes.

    ``delta_oracle`` is minus the finite part of the windowed overlap fitted
    by :func:`scatterkit.oracle.cesaro_delta_extract`; ``delta_cesaro`` is
    the plain running mean of the same windowed overlaps.
    """

    potential: str
    k1: float
    k2: float
    delta_general: complex
    delta_closed_form: complex | None
    delta_oracle: complex
    max_pairwise_disagreement: float
    delta_cesaro: complex
    delta_printed: complex | None = None
    lambda0: float = 0.0

    def to_dict(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            if isinstance(val, complex):
                out[key] = {"re": val.real, "im": val.imag}
            else:
                out[key] = val
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    CSV_HEADER = ("k1", "k2", "method", "re", "im")

    def csv_rows(self) -> list[tuple]:
        rows = []
        for name in ("delta_general", "delta_closed_form", "delta_oracle", "delta_cesaro", "delta_printed"):
            val = getattr(self, name)
            if val is not None:
                rows.append((self.k1, self.k2, name.removeprefix("delta_"), val.real, val.imag))
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(self.CSV_HEADER)
        for row in self.csv_rows():
            wr.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
        return buf.getvalue()


def default_lambda0(p: Potential, k1: float, k2: float) -> float:
    scale = {Family.SQUARE_WELL: p.width, Family.SECH2: sech2_cutoff(p)}.get(p.family, 1.0)
    return max(1e3 * scale, 200 * 2 * math.pi / abs(k1 - k2))


def delta_report(p: Potential, k1: float, k2: float, lambda0: float | None = None) -> DeltaTermReport:
    """Gather the general, closed-form and windowed-oracle values of Delta."""
    from scatterkit.oracle import cesaro_delta_extract

    if p.family is Family.LINEAR:
        raise PotentialError("no Delta closed form for the linear potential")
    _check_pair(k1, k2)
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    general = delta_term_1d(c1.R, c1.T, c2.R, c2.T, k1, k2)
    printed = None
    if p.family is Family.SQUARE_WELL:
        closed = delta_term_square_well(k1, k2, p)
        printed = delta_term_square_well(k1, k2, p, strict_paper=True)
    elif p.family in (Family.FREE, Family.DELTA):
        closed = 0j
    else:
        closed = None
    lam0 = lambda0 if lambda0 is not None else default_lambda0(p, k1, k2)
    ext = cesaro_delta_extract(p, k1, k2, lam0)
    oracle = -ext.fit_finite_part
    vals = [v for v in (general, closed, oracle) if v is not None]
    worst = max(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:])
    return DeltaTermReport(p.spec_string(), k1, k2, general, closed, oracle, float(worst),
                           -ext.averaged, printed, lam0)
