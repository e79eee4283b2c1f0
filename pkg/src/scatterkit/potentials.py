"""Catalog of the exactly solvable potential families.

Each family is an immutable :class:`Potential`.  Parameters use the names
accepted by the command line grammar ``family:key=value,key=value``:

=========== ============================ =====================
family      keys                         potential
=========== ============================ =====================
free        (none)                       V = 0
delta       g (default -1)               V = g delta(x)
squarewell  V0, a                        V = V0 on (-a/2, a/2)
sech2       V0, mu (default 1)           V = V0 / cosh^2(mu x)
linear      g (field), m (default 1)     V = m g z
=========== ============================ =====================

The delta default ``g = -1`` reproduces the canonical coefficients
R = i/(k - i), T = k/(k - i).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Family(str, enum.Enum):
    FREE = "free"
    DELTA = "delta"
    SQUARE_WELL = "squarewell"
    SECH2 = "sech2"
    LINEAR = "linear"


class PotentialError(ValueError):
    """Invalid potential parameters or unsupported operation."""


_KEYS = {
    Family.FREE: {},
    Family.DELTA: {"g": -1.0},
    Family.SQUARE_WELL: {"V0": None, "a": None},
    Family.SECH2: {"V0": None, "mu": 1.0},
    Family.LINEAR: {"g": None, "m": 1.0},
}


@dataclass(frozen=True)
class Potential:
    family: Family
    strength: float = 0.0
    width: float = 0.0
    inverse_range: float = 1.0
    mass: float = 1.0

    @property
    def support(self) -> tuple[float, float]:
        """Closed interval outside of which V vanishes (or is below 1e-16 for sech2)."""
        if self.family is Family.SQUARE_WELL:
            return (-self.width / 2, self.width / 2)
        if self.family is Family.DELTA:
            return (0.0, 0.0)
        if self.family is Family.SECH2:
            x = sech2_cutoff(self)
            return (-x, x)
        if self.family is Family.FREE:
            return (0.0, 0.0)
        return (-math.inf, math.inf)

    @property
    def length_scale(self) -> float:
        if self.family is Family.SQUARE_WELL:
            return self.width
        if self.family is Family.SECH2:
            return 1.0 / self.inverse_range
        return 1.0

    def params(self) -> dict[str, float]:
        f = self.family
        if f is Family.FREE:
            return {}
        if f is Family.DELTA:
            return {"g": self.strength}
        if f is Family.SQUARE_WELL:
            return {"V0": self.strength, "a": self.width}
        if f is Family.SECH2:
            return {"V0": self.strength, "mu": self.inverse_range}
        return {"g": self.strength, "m": self.mass}

    def spec_string(self) -> str:
        """Canonical ``family:key=value`` form; round-trips through :func:`parse_potential`."""
        p = self.params()
        if not p:
            return self.family.value
        body = ",".join(f"{k}={v!r}" for k, v in p.items())
        return f"{self.family.value}:{body}"


def make_potential(family: Family | str, **params: float) -> Potential:
    """Validate parameters and build a :class:`Potential`."""
    try:
        fam = Family(family.lower() if isinstance(family, str) else family)
    except ValueError:
        raise PotentialError(f"unknown potential family {family!r}") from None
    allowed = _KEYS[fam]
    unknown = set(params) - set(allowed)
    if unknown:
        raise PotentialError(f"unknown parameter(s) {sorted(unknown)} for {fam.value}")
    values = {}
    for key, default in allowed.items():
        if key in params:
            val = float(params[key])
        elif default is None:
            raise PotentialError(f"{fam.value} requires parameter {key!r}")
        else:
            val = default
        if not math.isfinite(val):
            raise PotentialError(f"parameter {key} must be finite")
        values[key] = val

    if fam is Family.FREE:
        return Potential(fam)
    if fam is Family.DELTA:
        return Potential(fam, strength=values["g"])
    if fam is Family.SQUARE_WELL:
        if values["a"] <= 0:
            raise PotentialError("square well width a must be positive")
        return Potential(fam, strength=values["V0"], width=values["a"])
    if fam is Family.SECH2:
        if values["mu"] <= 0:
            raise PotentialError("sech2 inverse range mu must be positive")
        return Potential(fam, strength=values["V0"], inverse_range=values["mu"])
    if values["m"] <= 0:
        raise PotentialError("mass must be positive")
    return Potential(fam, strength=values["g"], mass=values["m"])


def parse_potential(text: str) -> Potential:
    """Parse ``family:key=value{,key=value}``."""
    text = text.strip()
    name, _, body = text.partition(":")
    params: dict[str, float] = {}
    if body:
        for item in body.split(","):
            key, eq, val = item.partition("=")
            if not eq or not key.strip():
                raise PotentialError(f"malformed parameter {item!r} in {text!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise PotentialError(f"non-numeric value {val!r} for {key.strip()}") from None
    return make_potential(name.strip(), **params)


def sech2_cutoff(p: Potential, level: float = 1e-16) -> float:
    """Distance beyond which |V0|/cosh^2(mu x) < level * max(|V0|, 1)."""
    v = max(abs(p.strength), 1.0)
    # 1/cosh^2 y <= 4 e^{-2y}
    return math.log(4 * v / level) / (2 * p.inverse_range)


def evaluate(p: Potential, x):
    """Pointwise V(x); accepts scalars or arrays.

    The square well takes the value V0/2 exactly on its edges.
    """
    x = np.asarray(x, dtype=float)
    f = p.family
    if f is Family.DELTA:
        raise PotentialError("the delta potential has no pointwise value")
    if f is Family.FREE:
        out = np.zeros_like(x)
    elif f is Family.SQUARE_WELL:
        h = p.width / 2
        ax = np.abs(x)
        out = np.where(ax < h, p.strength, np.where(ax == h, p.strength / 2, 0.0))
    elif f is Family.SECH2:
        e = np.exp(-2 * np.abs(p.inverse_range * x))
        out = p.strength * 4 * e / (1 + e) ** 2
    else:
        out = p.mass * p.strength * x
    return out[()] if out.ndim == 0 else out
