"""Command line front end: ``scatterkit <command> [options]``.

Exit codes: 0 success, 1 numerical contract violated, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from scatterkit.potentials import Family, Potential, PotentialError, parse_potential
from scatterkit.special import ConvergenceError

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE = 0, 1, 2

JSON_SCHEMA = """JSON output schema (all commands with --format json):
  {"command": str, "config": str, "records": [object, ...]}
  complex values are {"re": number, "im": number}; numbers are IEEE doubles."""

COMMANDS = ("coeffs", "flux-scan", "overlap", "delta-term", "delta-surface", "regcompare",
            "airy-check", "wavepacket-norm", "radial-delta", "golden-verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        if message:
            sys.stdout.write(message)
        raise SystemExit(status)


def _potential_arg(text: str) -> str:
    try:
        return parse_potential(text).spec_string()
    except PotentialError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonnegative(text: str) -> float:
    v = _real(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(v):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# option name -> (type, default, help); default None means required
_OPTS = {
    "potential": (_potential_arg, None, "family:key=value{,key=value}"),
    "k": (_positive, None, "wavenumber"),
    "k1": (_positive, None, "first wavenumber"),
    "k2": (_positive, None, "second wavenumber"),
    "kmin": (_positive, None, "lowest wavenumber"),
    "kmax": (_positive, None, "highest wavenumber"),
    "nk": (_count, 200, "number of wavenumbers"),
    "x1": (_real, None, "window start"),
    "x2": (_real, None, "window end"),
    "method": (str, "window", "window | boundary | quad | regularized"),
    "eps": (_positive, 1e-3, "damping rate"),
    "lambda0": (_nonnegative, 0.0, "oracle window half-width start (0 picks a default)"),
    "length": (_positive, 50.0, "window length for I1"),
    "oracle": (int, 0, "1 to include the windowed oracle"),
    "sigma": (_positive, 0.5, "Gaussian width"),
    "half-window": (_positive, 40.0, "smearing half window T"),
    "tol": (_positive, 1e-3, "contract tolerance"),
    "k0": (_positive, 5.0, "packet mean momentum"),
    "n": (_count, 512, "momentum nodes"),
    "tmax": (_real, 50.0, "last time"),
    "nt": (_count, 51, "number of times"),
    "V0": (_real, -1.0, "radial well depth"),
    "a": (_positive, 1.5, "radial well radius"),
    "r-max": (_positive, 3.0, "radial matching radius"),
    "golden-dir": (str, "", "directory holding golden.json"),
}

_COMMAND_OPTS = {
    "coeffs": ("potential", "k"),
    "flux-scan": ("potential", "kmin", "kmax", "nk"),
    "overlap": ("potential", "k1", "k2", "x1", "x2", "method", "eps"),
    "delta-term": ("potential", "k1", "k2", "lambda0"),
    "delta-surface": ("potential", "kmin", "kmax", "nk", "oracle"),
    "regcompare": ("potential", "k1", "k2", "eps", "length"),
    "airy-check": ("sigma", "half-window", "tol"),
    "wavepacket-norm": ("potential", "k0", "sigma", "n", "tmax", "nt"),
    "radial-delta": ("V0", "a", "k1", "k2", "r-max", "lambda0"),
    "golden-verify": ("golden-dir",),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    fmt: str = "csv"
    output: str = "-"

    @property
    def potential(self) -> Potential | None:
        spec = self.options.get("potential")
        return parse_potential(spec) if spec else None

    def get(self, name):
        return self.options[name]

    def canonical(self) -> str:
        parts = [self.command]
        for name in _COMMAND_OPTS[self.command]:
            val = self.options[name]
            parts += [f"--{name}", repr(val) if isinstance(val, float) else str(val)]
        parts += ["--format", self.fmt, "--output", self.output]
        return shlex.join(parts)

    @classmethod
    def from_string(cls, text: str) -> "RunConfig":
        return parse_args(shlex.split(text))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scatterkit", description="Scattering-state overlaps of solvable 1D potentials.",
                     epilog=JSON_SCHEMA, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, epilog=JSON_SCHEMA, formatter_class=argparse.RawDescriptionHelpFormatter)
        for name in _COMMAND_OPTS[cmd]:
            typ, default, hlp = _OPTS[name]
            kw = {"type": typ, "help": hlp, "dest": name.replace("-", "_")}
            if default is None:
                kw["required"] = True
            else:
                kw["default"] = default
            sp.add_argument(f"--{name}", **kw)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default="-")
    return parser


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    opts = {name: getattr(ns, name.replace("-", "_")) for name in _COMMAND_OPTS[ns.command]}
    if ns.command == "overlap" and opts["method"] not in ("window", "boundary", "quad", "regularized"):
        raise UsageError(f"unknown overlap method {opts['method']!r}")
    if ns.command == "overlap" and not opts["x1"] < opts["x2"]:
        raise UsageError("need x1 < x2")
    if "kmin" in opts and not opts["kmin"] < opts["kmax"]:
        raise UsageError("need kmin < kmax")
    return RunConfig(ns.command, opts, ns.format, ns.output)


# -- output helpers ---------------------------------------------------------

def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, np.generic):
        return _jsonable(v.item())
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


class Table:
    def __init__(self, header):
        self.header = list(header)
        self.rows = []

    def add(self, *row):
        self.rows.append(list(row))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(self.header)
        for row in self.rows:
            wr.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def records(self):
        return [dict(zip(self.header, r)) for r in self.rows]


def _emit(cfg: RunConfig, table: Table) -> None:
    if cfg.fmt == "csv":
        text = table.to_csv()
    else:
        doc = {"command": cfg.command, "config": cfg.canonical(), "records": _jsonable(table.records())}
        text = json.dumps(doc, sort_keys=True) + "\n"
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SCATTERKIT_THREADS", "1")))
    except ValueError:
        return 1


# -- commands ---------------------------------------------------------------

def _cmd_coeffs(cfg):
    from scatterkit.states import coefficients
    c = coefficients(cfg.potential, cfg.get("k"))
    t = Table(["k", "R_re", "R_im", "T_re", "T_im", "flux_defect"])
    t.add(c.k, c.R.real, c.R.imag, c.T.real, c.T.imag, c.flux - 1)
    return t, abs(c.flux - 1) <= 1e-10


def _cmd_flux_scan(cfg):
    from scatterkit.states import coefficients
    p = cfg.potential
    t = Table(["k", "R2", "T2", "defect"])
    ok = True
    for k in np.linspace(cfg.get("kmin"), cfg.get("kmax"), cfg.get("nk")):
        c = coefficients(p, float(k))
        r2, t2 = abs(c.R) ** 2, abs(c.T) ** 2
        t.add(float(k), r2, t2, r2 + t2 - 1)
        ok &= abs(r2 + t2 - 1) <= 1e-10
    return t, ok


def _cmd_overlap(cfg):
    from scatterkit.oracle import quad_overlap
    from scatterkit.overlap import WindowSpec, overlap_from_boundary, overlap_window, regularized_overlap
    p, k1, k2 = cfg.potential, cfg.get("k1"), cfg.get("k2")
    w = WindowSpec(cfg.get("x1"), cfg.get("x2"))
    method = cfg.get("method")
    t = Table(["k1", "k2", "method", "re", "im"])
    if method == "regularized":
        d = regularized_overlap(p, k1, k2, cfg.get("eps"))
        t.add(k1, k2, "delta_km_coeff", d.delta_km_coeff.real, d.delta_km_coeff.imag)
        t.add(k1, k2, "delta_kp_coeff", d.delta_kp_coeff.real, d.delta_kp_coeff.imag)
        t.add(k1, k2, "finite_remainder", d.finite_remainder.real, d.finite_remainder.imag)
        return t, True
    fn = {"window": overlap_window, "boundary": overlap_from_boundary, "quad": quad_overlap}[method]
    v = fn(p, k1, k2, w)
    t.add(k1, k2, method, v.real, v.imag)
    return t, math.isfinite(abs(v))


def _cmd_delta_term(cfg):
    from scatterkit.delta import delta_report
    lam0 = cfg.get("lambda0") or None
    r = delta_report(cfg.potential, cfg.get("k1"), cfg.get("k2"), lam0)
    t = Table(["k1", "k2", "method", "re", "im"])
    for row in r.csv_rows():
        t.add(*row)
    t.add(r.k1, r.k2, "max_pairwise_disagreement", r.max_pairwise_disagreement, 0.0)
    return t, True


def _surface_row(args):
    from scatterkit.delta import delta_term_1d, delta_term_square_well
    from scatterkit.oracle import cesaro_delta_extract
    from scatterkit.states import coefficients
    p, k1, k2, with_oracle = args
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    rows = [("general", delta_term_1d(c1.R, c1.T, c2.R, c2.T, k1, k2))]
    if p.family is Family.SQUARE_WELL:
        rows.append(("closed_form", delta_term_square_well(k1, k2, p)))
    if with_oracle:
        rows.append(("oracle", -cesaro_delta_extract(p, k1, k2, 1000.0 * p.length_scale).fit_finite_part))
    return [(k1, k2, m, v.real, v.imag) for m, v in rows]


def _cmd_delta_surface(cfg):
    p = cfg.potential
    ks = [float(k) for k in np.linspace(cfg.get("kmin"), cfg.get("kmax"), cfg.get("nk"))]
    jobs = [(p, k1, k2, bool(cfg.get("oracle"))) for k1 in ks for k2 in ks if k1 != k2]
    t = Table(["k1", "k2", "method", "re", "im"])
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        for rows in ex.map(_surface_row, jobs):
            for row in rows:
                t.add(*row)
    return t, all(math.isfinite(r[3]) and math.isfinite(r[4]) for r in t.rows)


def _cmd_regcompare(cfg):
    from scatterkit.regcompare import regcompare
    r = regcompare(cfg.potential, cfg.get("k1"), cfg.get("k2"), cfg.get("eps"), length=cfg.get("length"))
    t = Table(["quantity", "re", "im"])
    for key, val in r.to_dict().items():
        if isinstance(val, dict):
            t.add(key, val["re"], val["im"])
        elif isinstance(val, bool):
            t.add(key, float(val), 0.0)
        else:
            t.add(key, float(val), 0.0)
    t.add("window_norm_ratio_oracle_over_paper", r.window_norm_oracle / r.window_norm_paper, 0.0)
    return t, r.leading_delta_match


def _cmd_airy_check(cfg):
    from scatterkit.special import airy_overlap_smeared, gaussian_target
    sigma, T, tol = cfg.get("sigma"), cfg.get("half-window"), cfg.get("tol")
    t = Table(["d", "smeared", "target", "error"])
    ok = True
    for d in (0.0, 1.0, 3.0):
        v = airy_overlap_smeared(0.0, d, T, sigma)
        g = gaussian_target(d, sigma)
        t.add(d, v, g, abs(v - g))
        ok &= abs(v - g) <= tol
    return t, ok


def _cmd_wavepacket_norm(cfg):
    from scatterkit.wavepacket import delta_matrix, gaussian_profile, norm_drift_bound, norm_trace
    p = cfg.potential
    prof = gaussian_profile(cfg.get("k0"), cfg.get("sigma"), cfg.get("n"))
    ts = np.linspace(0.0, cfg.get("tmax"), cfg.get("nt"))
    re, im = norm_trace(p, prof, ts)
    bound = norm_drift_bound(prof, delta_matrix(p, prof.k_grid))
    t = Table(["t", "N", "N_imag", "bound"])
    for ti, n, m in zip(ts, re, im):
        t.add(float(ti), float(n), float(m), bound)
    ok = bool(np.all(np.abs(re - re[0]) <= bound * (1 + 1e-9) + 1e-12))
    return t, ok


def _cmd_radial_delta(cfg):
    from scatterkit.delta import delta_term_radial
    from scatterkit.oracle import RadialWell, radial_cesaro_extract, radial_ode_solve, radial_square_well
    V0, a, k1, k2, r_max = cfg.get("V0"), cfg.get("a"), cfg.get("k1"), cfg.get("k2"), cfg.get("r-max")
    if r_max < a:
        raise UsageError("r-max must be at least the well radius")
    V = RadialWell(V0, a)
    s1, s2 = radial_ode_solve(V, k1, r_max), radial_ode_solve(V, k2, r_max)
    e1, e2 = radial_square_well(k1, V0, a), radial_square_well(k2, V0, a)
    lam0 = cfg.get("lambda0") or 200.0 * r_max
    ext = radial_cesaro_extract(V, k1, k2, lam0, r_max)
    t = Table(["k1", "k2", "method", "re", "im"])
    for name, (c1, c2) in (("ode", (s1, s2)), ("analytic", (e1, e2))):
        v = delta_term_radial(c1.T, c1.R, c2.T, c2.R, c1.phi0, c1.dphi0, c2.phi0, c2.dphi0, k1, k2)
        t.add(k1, k2, name, v.real, v.imag)
    t.add(k1, k2, "window_fit", ext.fit_finite_part.real, ext.fit_finite_part.imag)
    t.add(k1, k2, "cesaro", ext.averaged.real, ext.averaged.imag)
    return t, True


def _cmd_golden_verify(cfg):
    from scatterkit.golden import verify
    res = verify(cfg.get("golden-dir") or None)
    t = Table(["potential", "k1", "k2", "method", "error", "ok"])
    for rec, _, err, ok in res:
        t.add(rec["potential"], rec["k1"], rec["k2"], rec["method"], err, int(ok))
    return t, all(r[3] for r in res)


_HANDLERS = {
    "coeffs": _cmd_coeffs, "flux-scan": _cmd_flux_scan, "overlap": _cmd_overlap,
    "delta-term": _cmd_delta_term, "delta-surface": _cmd_delta_surface,
    "regcompare": _cmd_regcompare, "airy-check": _cmd_airy_check,
    "wavepacket-norm": _cmd_wavepacket_norm, "radial-delta": _cmd_radial_delta,
    "golden-verify": _cmd_golden_verify,
}


def run(cfg: RunConfig) -> int:
    try:
        table, ok = _HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (PotentialError, ValueError) as exc:
        print(f"scatterkit {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"scatterkit {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    _emit(cfg, table)
    return EXIT_OK if ok else EXIT_CONTRACT


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(str(exc).strip() or "usage error", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
