"""Batch command-line front end.

Subcommands cover spectrum generation/ingestion, grid evaluation, moments,
distribution and tail estimation, the arithmetic remainder tabulators, and
the hyperbolic counting tools.  Outputs are plain CSV/JSON with a comment
header echoing the tool version, the full configuration and input hashes;
identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .arithmetic import (
    DEFAULT_LATTICE_BUDGET,
    DEFAULT_PSI_BUDGET,
    bundled_zero_table,
    divisor_remainder,
    gauss_remainder,
    gauss_spectrum,
    load_zero_table,
    pnt_remainder,
    von_mangoldt_table,
    zeta_spectrum,
)
from .distribution import (
    DistributionEstimate,
    estimate_distribution,
    fit_tails,
    truncated_distribution,
)
from .errors import BudgetExceededError
from .hyperbolic.counting import (
    integrated_remainder_G3,
    load_spectral_data,
    main_term,
    pslz_spectral_data,
    variance_window,
)
from .hyperbolic.orbit import DEFAULT_NORM_BUDGET, ModularGroup, count_orbit
from .hyperbolic.plane import HPoint
from .hyperbolic.shc import shc_asymptotic, shc_imag, shc_integral, shc_small_r
from .moments import moment_convergence, theoretical_moment
from .spectrum import CutoffSchedule, fit_beta, load_spectrum, save_spectrum, window_coefficient_sums
from .trigsum import eval_grid, write_sampled_csv


def parse_complex_token(token: str) -> complex:
    """Complex scalars as `re+imi`, plus the special token i/2."""
    token = token.strip().replace(" ", "")
    if token in ("i/2", "+i/2"):
        return 0.5j
    if token == "-i/2":
        return -0.5j
    try:
        if "i" in token:
            return complex(token.replace("i", "j"))
        return complex(float(token))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex scalar {token!r}") from exc


def parse_point(token: str) -> HPoint:
    z = parse_complex_token(token)
    if not (z.imag > 0):
        raise argparse.ArgumentTypeError(f"point {token!r} not in the upper half-plane")
    return HPoint(z.real, z.imag)


def parse_float_list(token: str) -> list:
    return [float(p) for p in token.split(",") if p]


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()[:16]


def _config_echo(args) -> str:
    skip = {"func", "out"}
    pairs = sorted(
        (k, v) for k, v in vars(args).items() if k not in skip and v is not None
    )
    return " ".join(f"{k}={v}" for k, v in pairs)


def _header_lines(args, inputs=()) -> list:
    lines = [f"apfunc {__version__}", f"command: {args.command}",
             f"config: {_config_echo(args)}"]
    for path in inputs:
        lines.append(f"input {path} sha256/16: {_sha256(path)}")
    return lines


def _write_rows(path, header_lines, columns, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# columns: {columns}\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _write_json(path, meta_lines, payload):
    doc = {"meta": meta_lines, **payload}
    text = json.dumps(doc, sort_keys=True, indent=2)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _default_budget(fallback: int) -> int:
    env = os.environ.get("APFUNC_BUDGET")
    if env:
        return int(env)
    return fallback


def _schedule_from(args) -> CutoffSchedule:
    kind = getattr(args, "schedule", "constant")
    x0 = getattr(args, "X0", None)
    if kind == "constant":
        if x0 is None:
            raise ValueError("constant schedule needs --X0")
        return CutoffSchedule.constant(x0)
    if x0 is None:
        return CutoffSchedule(kind)
    return CutoffSchedule(kind, x0)


# --- subcommand bodies -------------------------------------------------------


def _cmd_spectrum(args) -> int:
    inputs = []
    if args.source == "csv":
        if not args.infile:
            raise ValueError("csv source needs --in")
        spec = load_spectrum(args.infile)
        inputs.append(args.infile)
    elif args.source == "zeta":
        if args.X is None:
            raise ValueError("zeta source needs --X")
        if args.zeros == "builtin":
            table = bundled_zero_table()
        else:
            table = load_zero_table(args.zeros)
            inputs.append(args.zeros)
        spec = zeta_spectrum(table, args.X)
    else:  # gauss
        if args.n_max is None:
            raise ValueError("gauss source needs --n-max")
        spec = gauss_spectrum(args.n_max)
    header = _header_lines(args, inputs)
    if args.fit_beta:
        t_max = spec.max_frequency
        windows = window_coefficient_sums(spec, args.beta_t_min, t_max)
        fit = fit_beta(windows)
        header.append(f"beta_hat: {fit.beta_hat:.17g}  r_squared: {fit.r_squared:.6g}")
    save_spectrum(spec, args.out, header=tuple(header))
    return 0


def _cmd_eval(args) -> int:
    spec = load_spectrum(args.spec)
    schedule = _schedule_from(args)
    f = eval_grid(spec, args.y0, args.y1, args.step, schedule,
                  fixed_Y=not args.pointwise_cutoff)
    write_sampled_csv(f, args.out, spec=spec,
                      extra_header=tuple(_header_lines(args, [args.spec])))
    return 0


def _cmd_moments(args) -> int:
    spec = load_spectrum(args.spec)
    schedule = (CutoffSchedule.constant(args.X0) if args.X0
                else CutoffSchedule.constant(max(spec.max_frequency, 1.0)))
    Ys = args.Y
    if Ys:
        report = moment_convergence(
            spec, args.order, schedule, Ys,
            tolerance=args.tolerance, max_terms=args.max_terms, exact=args.exact,
        )
    else:
        report = theoretical_moment(
            spec, args.order, tolerance=args.tolerance,
            max_terms=args.max_terms, exact=args.exact,
        )
    payload = json.loads(report.to_json())
    _write_json(args.out, _header_lines(args, [args.spec]), payload)
    return 0


def _cmd_dist(args) -> int:
    spec = load_spectrum(args.spec)
    if args.T is not None:
        est = truncated_distribution(spec, args.T, args.Y, args.bins, step=args.step)
    else:
        schedule = CutoffSchedule.constant(max(spec.max_frequency, 1.0))
        step = args.step
        if step is None:
            m = int(math.ceil(args.Y * spec.max_frequency / 0.45))
            m += m % 2
            step = args.Y / m
        f = eval_grid(spec, 0.0, args.Y, step, schedule, fixed_Y=True)
        est = estimate_distribution(f, args.Y, args.bins)
    est.write_csv(args.out, extra_header=tuple(_header_lines(args, [args.spec])))
    return 0


def load_histogram_csv(path) -> DistributionEstimate:
    """Read back a histogram CSV produced by the dist subcommand."""
    Y = None
    samples = None
    radius = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("#"):
                if line.startswith("# Y:"):
                    parts = line[4:].split()
                    Y = float(parts[0])
                    samples = int(parts[2])
                elif line.startswith("# support radius:"):
                    radius = float(line.split(":")[1])
                continue
            if line:
                left, right, mass = (float(p) for p in line.split(","))
                rows.append((left, right, mass))
    if not rows or Y is None or samples is None or radius is None:
        raise ValueError(f"{path}: malformed histogram file")
    edges = np.array([r[0] for r in rows] + [rows[-1][1]])
    masses = np.array([r[2] for r in rows])
    return DistributionEstimate(bin_edges=edges, masses=masses, Y=Y,
                                sample_count=samples, support_radius=radius)


def _cmd_tails(args) -> int:
    est = load_histogram_csv(args.hist)
    fit = fit_tails(est, args.S, beta=args.beta)
    payload = {
        "exponent_hat": fit.exponent_hat,
        "predicted_exponent": fit.predicted_exponent,
        "compact_support": fit.compact_support,
        "S_values": list(fit.S_values),
        "tail_masses": list(fit.tail_masses),
        "points_used": fit.points_used,
    }
    _write_json(args.out, _header_lines(args, [args.hist]), payload)
    return 0


def _grid(args):
    n = int(math.floor((args.y1 - args.y0) / args.step + 1e-9))
    return [args.y0 + k * args.step for k in range(n + 1)]


def _cmd_pnt(args) -> int:
    budget = args.budget or _default_budget(DEFAULT_PSI_BUDGET)
    ys = _grid(args)
    x_max = math.exp(ys[-1])
    if x_max > budget:
        raise BudgetExceededError(f"psi sieve budget {budget} < e^y1 = {x_max:g}")
    table = von_mangoldt_table(int(x_max))
    rows = [(y, pnt_remainder(y, table=table)) for y in ys]
    _write_rows(args.out, _header_lines(args), "y,q", rows)
    return 0


def _cmd_gauss(args) -> int:
    budget = args.budget or _default_budget(DEFAULT_LATTICE_BUDGET)
    rows = [(y, gauss_remainder(y, budget=budget)) for y in _grid(args)]
    _write_rows(args.out, _header_lines(args), "y,u", rows)
    return 0


def _cmd_divisor(args) -> int:
    budget = args.budget or _default_budget(DEFAULT_LATTICE_BUDGET)
    rows = [(y, divisor_remainder(y, budget=budget)) for y in _grid(args)]
    _write_rows(args.out, _header_lines(args), "y,v", rows)
    return 0


def _spectral_from(args):
    if getattr(args, "spectral", None):
        return load_spectral_data(args.spectral), [args.spectral]
    return pslz_spectral_data(), []


def _group_from(args):
    if args.group != "pslz":
        raise ValueError(f"unknown group {args.group!r} (only pslz is built in)")
    return ModularGroup()


def _cmd_hyp_count(args) -> int:
    group = _group_from(args)
    sd, inputs = _spectral_from(args)
    budget = args.budget or _default_budget(int(DEFAULT_NORM_BUDGET))
    rows = []
    for s in args.s:
        ball = count_orbit(group, s, args.z, args.w, budget=budget)
        M = main_term(sd, s)
        e = (ball.count - M) / math.exp(s / 2.0)
        rows.append((s, ball.count, M, e))
    _write_rows(args.out, _header_lines(args, inputs), "s,N,M,e", rows)
    return 0


def _cmd_hyp_variance(args) -> int:
    group = _group_from(args)
    sd, inputs = _spectral_from(args)
    budget = args.budget or _default_budget(int(DEFAULT_NORM_BUDGET))
    # one enumeration at the largest radius serves every window
    orbit = count_orbit(group, max(args.T) + 1.0, args.z, args.w, budget=budget)
    rows = []
    for T in args.T:
        H = variance_window(group, sd, T, args.z, args.w,
                            quad_step=args.quad_step, budget=budget, orbit=orbit)
        rows.append((T, H))
    _write_rows(args.out, _header_lines(args, inputs), "T,H", rows)
    return 0


def _cmd_hyp_g3(args) -> int:
    group = _group_from(args)
    sd, inputs = _spectral_from(args)
    budget = args.budget or _default_budget(int(DEFAULT_NORM_BUDGET))
    header = _header_lines(args, inputs)
    header.append(
        "note: exploratory for non-cocompact groups (boundedness proven "
        "only for compact quotients)"
    )
    rows = [(s, integrated_remainder_G3(group, sd, s, args.z, budget=budget))
            for s in args.s]
    _write_rows(args.out, header, "s,G3", rows)
    return 0


def _cmd_shc(args) -> int:
    t = args.t
    if args.regime == "integral":
        val = shc_integral(args.R, t)
    elif args.regime == "asymptotic":
        val = complex(shc_asymptotic(args.R, t.real))
    elif args.regime == "imag":
        val = complex(shc_imag(args.R, abs(t.imag) if t.imag else t.real))
    else:
        val = complex(shc_small_r(args.R, t.real))
    if abs(val.imag) <= 1e-12 * max(1.0, abs(val.real)):
        text = f"{val.real:.12g}"
    else:
        text = f"{val.real:.12g}{val.imag:+.12g}i"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for line in _header_lines(args):
                fh.write(f"# {line}\n")
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="apfunc",
        description="Almost-periodic remainder functions: sums, moments, "
        "distributions, hyperbolic counting.",
    )
    p.add_argument("--threads", type=int, default=0,
                   help="cap worker count (0 = all cores); results are "
                   "thread-count independent")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="generate or ingest a spectrum CSV")
    sp.add_argument("--from", dest="source", choices=("csv", "zeta", "gauss"),
                    required=True)
    sp.add_argument("--in", dest="infile", help="input spectrum CSV (csv source)")
    sp.add_argument("--zeros", default="builtin",
                    help="zero-table path or 'builtin' (zeta source)")
    sp.add_argument("--X", type=float, help="frequency cutoff (zeta source)")
    sp.add_argument("--n-max", type=int, help="largest index n (gauss source)")
    sp.add_argument("--fit-beta", action="store_true",
                    help="record the window-decay exponent in the header")
    sp.add_argument("--beta-t-min", type=float, default=1.0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_spectrum)

    ev = sub.add_parser("eval", help="tabulate the truncated sum on a grid")
    ev.add_argument("--spec", required=True)
    ev.add_argument("--y0", type=float, required=True)
    ev.add_argument("--y1", type=float, required=True)
    ev.add_argument("--step", type=float, required=True)
    ev.add_argument("--schedule", choices=("exponential", "linear", "constant"),
                    default="constant")
    ev.add_argument("--X0", type=float, help="schedule floor / constant cutoff")
    ev.add_argument("--pointwise-cutoff", action="store_true",
                    help="grow the cutoff pointwise as X = schedule(y)")
    ev.add_argument("--out", required=True)
    ev.set_defaults(func=_cmd_eval)

    mo = sub.add_parser("moments", help="empirical and resonance moments (JSON)")
    mo.add_argument("--spec", required=True)
    mo.add_argument("--order", type=int, required=True)
    mo.add_argument("--Y", type=parse_float_list, default=[],
                    help="comma-separated horizons for empirical moments")
    mo.add_argument("--X0", type=float, help="constant cutoff (default: all terms)")
    mo.add_argument("--tolerance", type=float)
    mo.add_argument("--exact", action="store_true")
    mo.add_argument("--max-terms", type=int, default=2_000_000)
    mo.add_argument("--out")
    mo.set_defaults(func=_cmd_moments)

    di = sub.add_parser("dist", help="occupation-time histogram (CSV)")
    di.add_argument("--spec", required=True)
    di.add_argument("--Y", type=float, required=True)
    di.add_argument("--bins", type=int, required=True)
    di.add_argument("--T", type=float, help="truncate the spectrum at T first")
    di.add_argument("--step", type=float)
    di.add_argument("--out", required=True)
    di.set_defaults(func=_cmd_dist)

    ta = sub.add_parser("tails", help="tail masses and decay exponent (JSON)")
    ta.add_argument("--hist", required=True, help="histogram CSV from dist")
    ta.add_argument("--S", type=parse_float_list, required=True)
    ta.add_argument("--beta", type=float)
    ta.add_argument("--out")
    ta.set_defaults(func=_cmd_tails)

    for name, fn, help_text in (
        ("pnt", _cmd_pnt, "normalised prime-counting remainder q(y)"),
        ("gauss", _cmd_gauss, "normalised circle remainder u(y)"),
        ("divisor", _cmd_divisor, "normalised divisor remainder v(y)"),
    ):
        ar = sub.add_parser(name, help=help_text)
        ar.add_argument("--y0", type=float, required=True)
        ar.add_argument("--y1", type=float, required=True)
        ar.add_argument("--step", type=float, required=True)
        ar.add_argument("--budget", type=int)
        ar.add_argument("--out", required=True)
        ar.set_defaults(func=fn)

    hc = sub.add_parser("hyp-count", help="orbit count, main term, remainder")
    hc.add_argument("--group", default="pslz")
    hc.add_argument("--s", type=parse_float_list, required=True)
    hc.add_argument("--z", type=parse_point, required=True)
    hc.add_argument("--w", type=parse_point, required=True)
    hc.add_argument("--spectral", help="spectral-data file (default: modular surface)")
    hc.add_argument("--budget", type=float)
    hc.add_argument("--out", required=True)
    hc.set_defaults(func=_cmd_hyp_count)

    hv = sub.add_parser("hyp-variance", help="windowed variance H(T)")
    hv.add_argument("--group", default="pslz")
    hv.add_argument("--T", type=parse_float_list, required=True)
    hv.add_argument("--z", type=parse_point, required=True)
    hv.add_argument("--w", type=parse_point, required=True)
    hv.add_argument("--spectral")
    hv.add_argument("--quad-step", type=float, default=1e-3)
    hv.add_argument("--budget", type=float)
    hv.add_argument("--out", required=True)
    hv.set_defaults(func=_cmd_hyp_variance)

    hg = sub.add_parser("hyp-g3", help="radially integrated remainder")
    hg.add_argument("--group", default="pslz")
    hg.add_argument("--s", type=parse_float_list, required=True)
    hg.add_argument("--z", type=parse_point, required=True)
    hg.add_argument("--spectral")
    hg.add_argument("--quad-step", type=float, default=1e-4)
    hg.add_argument("--budget", type=float)
    hg.add_argument("--out", required=True)
    hg.set_defaults(func=_cmd_hyp_g3)

    sh = sub.add_parser("shc", help="spectral transform of the ball indicator")
    sh.add_argument("--R", type=float, required=True)
    sh.add_argument("--t", type=parse_complex_token, required=True)
    sh.add_argument("--regime",
                    choices=("integral", "asymptotic", "imag", "small-r"),
                    default="integral")
    sh.add_argument("--out")
    sh.set_defaults(func=_cmd_shc)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 0:
        parser.error("--threads must be >= 0")
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
