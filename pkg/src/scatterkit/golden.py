"""Golden reference records and their verification.

A record is ``{potential, k1, k2, method, value_re, value_im, tolerance}``;
``wavepacket_norm`` records also carry ``t`` and read k1, k2 as k0, sigma.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

from scatterkit.delta import delta_term_1d, delta_term_square_well
from scatterkit.oracle import cesaro_delta_extract
from scatterkit.potentials import parse_potential
from scatterkit.states import coefficients
from scatterkit.wavepacket import gaussian_profile, norm_trace

GOLDEN_FILE = "golden.json"

SECH2_PAIRS = [(0.7, 1.3), (1.1, 1.7), (0.5, 2.5), (1.9, 0.8), (2.2, 3.1),
               (0.9, 1.0), (3.3, 1.4), (1.2, 2.0), (2.7, 2.9), (0.6, 3.6)]
SQUARE_WELL_PAIRS = [(1.1, 1.7), (1.3, 2.1), (0.6, 1.5), (2.4, 1.2), (1.9, 3.3),
                     (0.8, 0.95), (2.9, 4.4), (1.6, 0.7), (3.8, 2.2), (1.05, 5.0)]
SECH2_SPEC = "sech2:V0=-0.3,mu=1.0"
SQUARE_WELL_SPEC = "squarewell:V0=0.5,a=2.0"
PACKET = (5.0, 0.5, 512)
PACKET_TIMES = (0.0, 1.0, 5.0, 10.0, 25.0, 50.0)


def default_dir() -> Path:
    return Path(str(resources.files("scatterkit") / "data"))


def evaluate_record(rec: dict) -> complex:
    p = parse_potential(rec["potential"])
    k1, k2 = rec["k1"], rec["k2"]
    method = rec["method"]
    if method == "delta_1d":
        c1, c2 = coefficients(p, k1), coefficients(p, k2)
        return delta_term_1d(c1.R, c1.T, c2.R, c2.T, k1, k2)
    if method == "delta_square_well":
        return delta_term_square_well(k1, k2, p)
    if method == "wavepacket_norm":
        prof = gaussian_profile(k1, k2, PACKET[2])
        re, im = norm_trace(p, prof, [rec["t"]])
        return complex(re[0], im[0])
    raise ValueError(f"unknown golden method {method!r}")


def generate(oracle_tol: float = 1e-9) -> list[dict]:
    """Build the records, confirming every Delta against the windowed oracle."""
    recs = []

    def add(spec, k1, k2, method, val, tol, **extra):
        recs.append({"potential": spec, "k1": k1, "k2": k2, "method": method,
                     "value_re": val.real, "value_im": val.imag, "tolerance": tol, **extra})

    for spec, pairs, methods in ((SECH2_SPEC, SECH2_PAIRS, ("delta_1d",)),
                                 (SQUARE_WELL_SPEC, SQUARE_WELL_PAIRS, ("delta_1d", "delta_square_well"))):
        p = parse_potential(spec)
        for k1, k2 in pairs:
            ref = -cesaro_delta_extract(p, k1, k2, 2000.0 * p.length_scale).fit_finite_part
            for m in methods:
                val = evaluate_record({"potential": spec, "k1": k1, "k2": k2, "method": m})
                if abs(val - ref) > oracle_tol * max(1.0, abs(ref)):
                    raise AssertionError(f"{spec} {k1} {k2} {m}: {val} vs oracle {ref}")
                add(spec, k1, k2, m, val, 1e-12)
    k0, sigma, _ = PACKET
    for spec in ("free", "delta:g=-1.0", SQUARE_WELL_SPEC):
        for t in PACKET_TIMES:
            rec = {"potential": spec, "k1": k0, "k2": sigma, "method": "wavepacket_norm", "t": t}
            add(spec, k0, sigma, "wavepacket_norm", evaluate_record(rec), 1e-10, t=t)
    return recs


def write(path: Path | None = None) -> Path:
    path = Path(path) if path else default_dir() / GOLDEN_FILE
    path.write_text(json.dumps(generate(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load(directory: Path | str | None = None) -> list[dict]:
    d = Path(directory) if directory else default_dir()
    return json.loads((d / GOLDEN_FILE).read_text(encoding="utf-8"))


def verify(directory: Path | str | None = None) -> list[tuple[dict, complex, float, bool]]:
    """Recompute each record; returns (record, value, error, ok) tuples."""
    out = []
    for rec in load(directory):
        val = evaluate_record(rec)
        ref = complex(rec["value_re"], rec["value_im"])
        err = abs(val - ref)
        ok = math.isfinite(err) and err <= rec["tolerance"] * max(1.0, abs(ref))
        out.append((rec, val, err, ok))
    return out


if __name__ == "__main__":
    print(write())
