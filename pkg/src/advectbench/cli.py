"""Command-line front end.

Subcommands:

* ``simulate``    -- time-step a scheme, report error norms, optionally dump
  the field and error matrices as CSV.
* ``solve-error`` -- solve the matricial error equation and report norms,
  solvability diagnostics and the achieved residual.
* ``sweep``       -- sweep cells-per-wavelength, writing one CSV row per
  point (simulation and matrix-equation error norms side by side) and an
  optional SVG line chart.
* ``diagnose``    -- print the normalized operator spectra and the
  uniqueness verdict, plus structural notes on the paper closure.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 singular system
without the min-norm method.

Flags override an optional ``key=value`` config file (``--config``); unknown
config keys are errors.  Floats are written with round-trip precision so
identical configurations produce byte-identical CSV.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import advect, assembly, linalg, sylvester
from .errors import AdvectBenchError, SingularSystemError, UsageError
from .schemes import (BUILTIN_SCHEMES, Discretization, SignalSpec,
                      builtin_scheme, custom_scheme)

_CONFIG_KEYS = {
    "scheme": str, "coeffs": str, "nx": int, "nt": int, "h": float,
    "sigma": float, "tau": float, "c": float, "n_lambda": float,
    "wavelength": float, "variant": str, "method": str,
    "nl_min": float, "nl_max": float, "nl_step": float,
    "out": str, "svg": str, "iso": str,
}


@dataclass
class RunConfig:
    """Resolved run parameters shared by all subcommands."""

    scheme: object
    disc: Discretization
    signal: SignalSpec
    variant: str
    method: str
    nl_min: float
    nl_max: float
    nl_step: float
    out: str
    svg: str
    iso: str


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def _fmt(x):
    """Round-trip decimal representation of a float."""
    return repr(float(x))


def _read_config(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {text!r}")
        key, _, raw = text.partition("=")
        key = key.strip().replace("-", "_")
        if key == "lambda":
            key = "wavelength"
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](raw.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _merge(args):
    """Layer command-line flags over the optional config file."""
    merged = _read_config(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        if hasattr(args, key) and getattr(args, key) is not None:
            merged[key] = getattr(args, key)
    return merged


def _resolve(args, need_signal=True):
    m = _merge(args)
    nx = m.get("nx", 20)
    nt = m.get("nt", 20)
    h = m.get("h", 1.0)
    c = m.get("c", 1.0)
    if "sigma" in m and "tau" in m:
        raise UsageError("give exactly one of --sigma and --tau")
    if "tau" in m:
        disc = Discretization(nx=nx, nt=nt, h=h, tau=m["tau"], c=c)
    else:
        disc = Discretization.from_cfl(nx=nx, nt=nt, h=h,
                                       sigma=m.get("sigma", 0.8), c=c)
    if "scheme" in m and "coeffs" in m:
        raise UsageError("give exactly one of --scheme and --coeffs")
    if "coeffs" in m:
        parts = [p for p in m["coeffs"].replace(",", " ").split() if p]
        try:
            scheme = custom_scheme([float(p) for p in parts])
        except ValueError as exc:
            raise UsageError(f"bad --coeffs value: {exc}") from exc
    elif "scheme" in m:
        scheme = builtin_scheme(m["scheme"], disc)
    else:
        raise UsageError(
            f"a scheme is required: --scheme {{{','.join(BUILTIN_SCHEMES)}}} "
            "or --coeffs a,b,g,d,e,z,h,t,v")
    if "n_lambda" in m and "wavelength" in m:
        raise UsageError("give exactly one of --n-lambda and --lambda")
    if "wavelength" in m:
        signal = SignalSpec.from_wavelength(m["wavelength"], disc)
    else:
        signal = SignalSpec.from_cells_per_wavelength(m.get("n_lambda", 10.0), disc)
    return RunConfig(
        scheme=scheme, disc=disc, signal=signal,
        variant=m.get("variant", "paper"),
        method=m.get("method", "min-norm"),
        nl_min=m.get("nl_min", 4.0),
        nl_max=m.get("nl_max", 20.0),
        nl_step=m.get("nl_step", 0.2),
        out=m.get("out"), svg=m.get("svg"), iso=m.get("iso"),
    )


def _write_field_csv(path, values):
    rows, cols = values.shape
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("i," + ",".join(f"n{n}" for n in range(1, cols + 1)) + "\n")
        for r in range(rows):
            fh.write(",".join([str(r + 1)] + [_fmt(v) for v in values[r]]) + "\n")


def _print_summary(label, summary):
    print(f"{label}: frob={_fmt(summary.frob)} grid_l2={_fmt(summary.grid_l2)} "
          f"grid_l2_squared={_fmt(summary.grid_l2_squared)} "
          f"max_abs={_fmt(summary.max_abs)}")


def _derived_path(path, suffix):
    stem, dot, ext = path.rpartition(".")
    if dot:
        return f"{stem}{suffix}.{ext}"
    return path + suffix


def cmd_simulate(args):
    cfg = _resolve(args)
    known = advect.exact_provider(cfg.disc, cfg.signal)
    u = advect.time_step_simulate(cfg.scheme, cfg.disc, known)
    e = advect.error_matrix(u, advect.sample_exact(cfg.disc, cfg.signal))
    _print_summary("error", advect.error_summary(e))
    if cfg.out:
        _write_field_csv(cfg.out, u.values)
        _write_field_csv(_derived_path(cfg.out, "_error"), e.values)
        print(f"wrote {cfg.out} and {_derived_path(cfg.out, '_error')}")
    return 0


def _print_report(report):
    uniq = "true" if report.unique else "false"
    print(f"unique={uniq} min_separation={_fmt(report.min_separation)} "
          f"sep_tol={_fmt(report.sep_tol)}")
    if report.notes:
        print(f"notes: {report.notes}")


def cmd_solve_error(args):
    cfg = _resolve(args)
    solver = sylvester.ErrorEquationSolver(cfg.scheme, cfg.disc,
                                           variant=cfg.variant, method=cfg.method)
    e, report, residual = solver.solve(cfg.signal)
    _print_summary("error", advect.error_summary(e))
    _print_report(report)
    print(f"residual={_fmt(residual)}")
    if cfg.method == "min-norm":
        print(f"rank={solver._cod.rank} of {solver._cod.shape[0]}")
    if cfg.out:
        _write_field_csv(cfg.out, e.values)
        print(f"wrote {cfg.out}")
    return 0


SWEEP_COLUMNS = ("n_lambda",
                 "err_sim_frob", "err_sim_grid_l2", "err_sim_grid_l2_squared",
                 "err_mtx_frob", "err_mtx_grid_l2", "err_mtx_grid_l2_squared",
                 "unique", "min_separation")


@dataclass(frozen=True)
class SweepRecord:
    """One row of the cells-per-wavelength study."""

    n_lambda: float
    err_sim_frob: float
    err_sim_grid_l2: float
    err_sim_grid_l2_squared: float
    err_mtx_frob: float
    err_mtx_grid_l2: float
    err_mtx_grid_l2_squared: float
    unique: bool
    min_separation: float

    def csv_row(self):
        vals = [_fmt(self.n_lambda),
                _fmt(self.err_sim_frob), _fmt(self.err_sim_grid_l2),
                _fmt(self.err_sim_grid_l2_squared),
                _fmt(self.err_mtx_frob), _fmt(self.err_mtx_grid_l2),
                _fmt(self.err_mtx_grid_l2_squared),
                "true" if self.unique else "false",
                _fmt(self.min_separation)]
        return ",".join(vals)


def sweep_values(nl_min, nl_max, nl_step):
    if not nl_step > 0.0:
        raise UsageError(f"--nl-step must be positive, got {nl_step}")
    if nl_min > nl_max:
        raise UsageError(f"empty sweep range: {nl_min} > {nl_max}")
    count = int(np.floor((nl_max - nl_min) / nl_step + 1e-9))
    return [nl_min + k * nl_step for k in range(count + 1)]


def run_sweep(cfg):
    """Evaluate both error paths over the n_lambda grid, ordered ascending.

    Returns (records, iso) where iso maps each n_lambda to the per-time-column
    Euclidean norms of the simulation error (the isovalue grid).
    """
    solver = sylvester.ErrorEquationSolver(cfg.scheme, cfg.disc,
                                           variant=cfg.variant, method=cfg.method)
    records, iso = [], []
    for nl in sweep_values(cfg.nl_min, cfg.nl_max, cfg.nl_step):
        signal = SignalSpec.from_cells_per_wavelength(nl, cfg.disc)
        known = advect.exact_provider(cfg.disc, signal)
        u = advect.time_step_simulate(cfg.scheme, cfg.disc, known)
        e_field_sim = advect.error_matrix(u, advect.sample_exact(cfg.disc, signal))
        e_sim = advect.error_summary(e_field_sim)
        iso.append((nl, np.sqrt(np.sum(e_field_sim.values ** 2, axis=0))))
        e_field, report, _ = solver.solve(signal)
        e_mtx = advect.error_summary(e_field)
        records.append(SweepRecord(
            n_lambda=nl,
            err_sim_frob=e_sim.frob, err_sim_grid_l2=e_sim.grid_l2,
            err_sim_grid_l2_squared=e_sim.grid_l2_squared,
            err_mtx_frob=e_mtx.frob, err_mtx_grid_l2=e_mtx.grid_l2,
            err_mtx_grid_l2_squared=e_mtx.grid_l2_squared,
            unique=report.unique, min_separation=report.min_separation))
    return records, iso


def write_sweep_csv(records, stream):
    stream.write(",".join(SWEEP_COLUMNS) + "\n")
    for rec in records:
        stream.write(rec.csv_row() + "\n")


def write_sweep_svg(records, path):
    """Self-contained line chart: grid_l2_squared of both paths vs n_lambda."""
    width, height = 640, 420
    ml, mr, mt, mb = 60, 20, 20, 50
    xs = [r.n_lambda for r in records]
    series = [("simulation", "#1f77b4", [r.err_sim_grid_l2_squared for r in records]),
              ("matrix equation", "#d62728", [r.err_mtx_grid_l2_squared for r in records])]
    x0, x1 = min(xs), max(xs)
    ymax = max(max(ys) for _, _, ys in series) or 1.0
    xspan = (x1 - x0) or 1.0

    def px(x):
        return ml + (x - x0) / xspan * (width - ml - mr)

    def py(y):
        return height - mb - y / ymax * (height - mt - mb)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" stroke="black"/>',
             f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>',
             f'<text x="{(ml + width - mr) / 2}" y="{height - 12}" text-anchor="middle" '
             f'font-size="13">cells per wavelength</text>',
             f'<text x="14" y="{(mt + height - mb) / 2}" text-anchor="middle" font-size="13" '
             f'transform="rotate(-90 14 {(mt + height - mb) / 2})">squared grid L2 error</text>']
    for k in range(5):
        xv = x0 + k * xspan / 4
        parts.append(f'<text x="{px(xv):.1f}" y="{height - mb + 16}" text-anchor="middle" '
                     f'font-size="11">{xv:g}</text>')
        yv = ymax * k / 4
        parts.append(f'<text x="{ml - 6}" y="{py(yv):.1f}" text-anchor="end" '
                     f'font-size="11">{yv:.3g}</text>')
    for idx, (label, color, ys) in enumerate(series):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = mt + 16 + 18 * idx
        parts.append(f'<line x1="{width - 190}" y1="{ly - 4}" x2="{width - 165}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{width - 160}" y="{ly}" font-size="12">{label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def write_iso_csv(iso, path):
    """Isovalue grid: one row per n_lambda, one column per time level, entries
    the Euclidean norm over space of that error column."""
    cols = len(iso[0][1]) if iso else 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n_lambda," + ",".join(f"n{n}" for n in range(1, cols + 1)) + "\n")
        for nl, row in iso:
            fh.write(",".join([_fmt(nl)] + [_fmt(v) for v in row]) + "\n")


def cmd_sweep(args):
    cfg = _resolve(args)
    records, iso = run_sweep(cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            write_sweep_csv(records, fh)
        print(f"wrote {cfg.out} ({len(records)} rows)")
    else:
        write_sweep_csv(records, sys.stdout)
    if cfg.svg:
        write_sweep_svg(records, cfg.svg)
        print(f"wrote {cfg.svg}")
    if cfg.iso:
        write_iso_csv(iso, cfg.iso)
        print(f"wrote {cfg.iso}")
    return 0


def _fmt_complex(z):
    return f"{z.real:+.12e}{z.imag:+.12e}j"


def cmd_diagnose(args):
    cfg = _resolve(args)
    prob = assembly.assemble(cfg.scheme, cfg.disc,
                             advect.exact_provider(cfg.disc, cfg.signal),
                             variant="paper")
    norm = assembly.normalize(prob)
    report = sylvester.diagnose(sylvester.SylvesterProblem(
        norm.m1, norm.m2, np.zeros(prob.shape)))
    key = lambda z: (z.real, z.imag)
    print("spectrum of normalized M1:")
    for z in sorted(report.spectrum_a, key=key):
        print(f"  {_fmt_complex(z)}")
    print("spectrum of normalized -M2:")
    for z in sorted(report.spectrum_neg_b, key=key):
        print(f"  {_fmt_complex(z)}")
    _print_report(report)
    if cfg.scheme.has_corner_terms:
        g = assembly.global_operator(cfg.scheme, cfg.disc, "paper")
        smin = linalg.smallest_singular_value(g)
        print("note: L != 0, so uniqueness diagnostics apply to the "
              "vectorized global operator")
        print(f"smallest singular value of the vectorized operator: {_fmt(smin)}")
    if not cfg.scheme.is_three_level:
        print("note: two-level stencil, so the initial data u_i^0 never "
              "enters the interior columns of M0 in the paper closure")
    print("note: the paper closure's final time column is a truncated "
          "stencil (future terms beyond the horizon are absent)")
    return 0


def _add_common(parser):
    parser.add_argument("--scheme", help="built-in scheme name: " + ", ".join(BUILTIN_SCHEMES))
    parser.add_argument("--coeffs", metavar="a,b,g,d,e,z,h,t,v",
                        help="nine custom stencil coefficients")
    parser.add_argument("--nx", type=int, help="space steps (default 20)")
    parser.add_argument("--nt", type=int, help="time steps (default 20)")
    parser.add_argument("--h", type=float, help="mesh size (default 1)")
    parser.add_argument("--sigma", type=float, help="CFL number (default 0.8)")
    parser.add_argument("--tau", type=float, help="time step (alternative to --sigma)")
    parser.add_argument("--c", type=float, help="advection speed (default 1)")
    parser.add_argument("--n-lambda", dest="n_lambda", type=float,
                        help="cells per wavelength (default 10)")
    parser.add_argument("--lambda", dest="wavelength", type=float,
                        help="wavelength (alternative to --n-lambda)")
    parser.add_argument("--variant", choices=assembly.VARIANTS,
                        help="closure variant (default paper)")
    parser.add_argument("--method", choices=sylvester.METHODS,
                        help="error-equation method (default min-norm)")
    parser.add_argument("--nl-min", dest="nl_min", type=float,
                        help="sweep lower bound on n_lambda (default 4)")
    parser.add_argument("--nl-max", dest="nl_max", type=float,
                        help="sweep upper bound on n_lambda (default 20)")
    parser.add_argument("--nl-step", dest="nl_step", type=float,
                        help="sweep step on n_lambda (default 0.2)")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--svg", help="output SVG path (sweep only)")
    parser.add_argument("--iso", help="isovalue CSV grid path (sweep only): "
                        "per-time-column error magnitudes vs n_lambda")
    parser.add_argument("--config", help="key=value config file; flags override")


def build_parser():
    parser = _Parser(prog="advectbench",
                     description="finite-difference scheme workbench for the "
                                 "1-D transport equation")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, func, desc in (
            ("simulate", cmd_simulate, "time-step a scheme and report error norms"),
            ("solve-error", cmd_solve_error, "solve the matricial error equation"),
            ("sweep", cmd_sweep, "sweep cells per wavelength"),
            ("diagnose", cmd_diagnose, "operator spectra and uniqueness verdict")):
        p = sub.add_parser(name, help=desc, description=desc)
        _add_common(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError(parser.format_usage())
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SingularSystemError as exc:
        print(f"singular system: {exc}", file=sys.stderr)
        return 3
    except AdvectBenchError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
