"""Command-line sweeps producing deterministic CSV.

Subcommands: ``advantage``, ``measurement``, ``contour``, ``scanrate``,
``fisher-alpha`` and ``selfcheck``.  Every swept parameter accepts a single
value, a linear grid ``lo:step:hi`` or a log grid ``lo:npts:hi:log``.
Gains are given in dB (``x_dB = 10 log10 x``).  Output is a ``#``-prefixed
preamble (version, command, config hash, config echo), a header row, and
one row per grid point with floats formatted ``.17g``.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .cavity import AxionParams, CavityParams, SourceSpec
from .errors import AxionQFIError, MeasurementModelError
from .optimize import (
    advantage,
    asymptotics_smss,
    asymptotics_tmss,
    default_t_range,
    optimize_g,
    rate_star,
    result1_region,
)
from .protocols import check_pair, rate

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


# -- grids and formatting ----------------------------------------------------------------------


def parse_grid(text: str) -> list[float]:
    """``"v"`` -> ``[v]``; ``"lo:step:hi"`` -> inclusive linear grid; ``"lo:n:hi:log"`` -> log grid."""
    parts = str(text).strip().split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, step, hi = map(float, parts)
            if step <= 0:
                raise UsageError(f"grid step must be > 0 in {text!r}")
            if hi < lo:
                return []
            n = int(np.floor((hi - lo) / step * (1 + 1e-12) + 1e-9)) + 1
            return [lo + i * step for i in range(n)]
        if len(parts) == 4 and parts[3] == "log":
            lo, hi = float(parts[0]), float(parts[2])
            n = int(parts[1])
            if lo <= 0 or hi <= 0:
                raise UsageError(f"log grid bounds must be > 0 in {text!r}")
            if n <= 0:
                return []
            if n == 1:
                return [lo]
            return [float(v) for v in np.logspace(np.log10(lo), np.log10(hi), n)]
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}") from exc
    raise UsageError(f"cannot parse grid {text!r}; use v, lo:step:hi or lo:npts:hi:log")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def config_items(args) -> list[tuple[str, str]]:
    skip = {"func", "out", "threads", "config", "columns"}
    return sorted((k, fmt(v)) for k, v in vars(args).items() if k not in skip and v is not None)


def config_hash(items) -> str:
    text = "\n".join(f"{k}={v}" for k, v in items)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def write_csv(stream, args, command, columns, rows):
    items = config_items(args)
    stream.write(f"# axionqfi {__version__}\n")
    stream.write(f"# command: {command}\n")
    stream.write(f"# config_hash: {config_hash(items)}\n")
    for k, v in items:
        stream.write(f"# {k}={v}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(fmt(row.get(c, "")) for c in columns) + "\n")


def _run_grid(fn, points, threads):
    """Evaluate ``fn`` on every point, keeping grid order; errors become rows with an ``error`` field."""
    if threads and threads > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_safe_call, [fn] * len(points), points))
    return [_safe_call(fn, p) for p in points]


def _safe_call(fn, point):
    try:
        row = fn(point)
        row.setdefault("error", "")
        return row
    except (AxionQFIError, ArithmeticError, ValueError) as exc:
        row = dict(point)
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return row


def _db(x):
    return 10.0 * np.log10(x) if x > 0 else float("-inf")


def _source(kind: str, g_db: float) -> SourceSpec:
    if kind == "vacuum":
        return SourceSpec.vacuum()
    gain = 10.0 ** (g_db / 10.0)
    return SourceSpec.smss(gain) if kind == "smss" else SourceSpec.tmss(gain)


def _fixed_t(value, cavity, baseline):
    if value in (None, "opt"):
        return None
    if value == "vacuum-opt":
        return baseline.t_star
    return float(value)


# -- advantage ------------------------------------------------------------------------------------


ADV_COLUMNS = ["source", "receiver", "G_dB", "N_T", "gamma_tau", "gamma_idler_tau", "omega_tau",
               "T_star_tau", "R_star", "R_star_vac", "advantage_dB"]
ASYM_COLUMNS = ["G_TH", "G_SAT", "T_star_pred_tau", "advantage_pred_dB"]


def _advantage_point(p):
    cav = CavityParams(p["gamma_tau"], p["gamma_idler_tau"], p["N_T"])
    src = _source(p["source"], p["G_dB"])
    receiver = check_pair(src, p["receiver"])
    w = p["omega_tau"]
    base = rate_star(SourceSpec.vacuum(), "qfi", cav, w)
    fixed = _fixed_t(p["fixed_t"], cav, base)
    row = dict(p)
    if receiver.value == "null":
        from .receivers import cfi_nulling
        t = fixed if fixed is not None else rate_star(src, "qfi", cav, w).t_star
        r = cfi_nulling(src, t, cav, AxionParams(w, 0.0)) / t
    elif fixed is not None:
        t, r = fixed, float(rate(src, receiver, fixed, cav, w))
    else:
        opt = rate_star(src, receiver, cav, w)
        t, r = opt.t_star, opt.rate_star
    row.update(T_star_tau=t, R_star=r, R_star_vac=base.rate_star, advantage_dB=_db(r / base.rate_star))
    if p.get("asymptotics") and src.kind.value != "vacuum":
        pred = (asymptotics_smss if src.kind.value == "smss" else asymptotics_tmss)(cav, src.gain)
        row.update(G_TH=pred.g_th, G_SAT=pred.g_sat, T_star_pred_tau=pred.t_star_pred,
                   advantage_pred_dB=_db(pred.advantage_pred))
    return row


def cmd_advantage(args):
    points = [dict(source=args.source, receiver=args.receiver, G_dB=g, N_T=n, gamma_tau=gt,
                   gamma_idler_tau=gi, omega_tau=w, fixed_t=args.fixed_t, asymptotics=args.asymptotics)
              for g, n, gt, gi, w in itertools.product(args.g_db, args.nt, args.gamma_tau,
                                                       args.gamma_idler_tau, args.omega_tau)]
    rows = _run_grid(_advantage_point, points, args.threads)
    cols = ADV_COLUMNS + (ASYM_COLUMNS if args.asymptotics else []) + ["error"]
    return cols, rows


# -- measurement ------------------------------------------------------------------------------------


PROTOCOLS = [("VAC-HOM", "vacuum", "hom"), ("VAC-HET", "vacuum", "het"), ("VAC-QFI", "vacuum", "qfi"),
             ("SMSS-HOM", "smss", "hom"), ("SMSS-NULL", "smss", "null"), ("TMSS-Bell", "tmss", "bell"),
             ("TMSS-NULL", "tmss", "null"), ("SMSS-QFI", "smss", "qfi"), ("TMSS-QFI", "tmss", "qfi")]
MEAS_COLUMNS = ["G_dB", "N_T", "gamma_tau", "gamma_idler_tau", "protocol", "T_star_tau", "R_star",
                "advantage_over_vac_hom_dB", "error"]


def _measurement_point(p):
    cav = CavityParams(p["gamma_tau"], p["gamma_idler_tau"], p["N_T"])
    ref = rate_star(SourceSpec.vacuum(), "hom", cav).rate_star
    src = _source(p["source"], p["G_dB"])
    if p["receiver"] == "null":
        from .receivers import cfi_nulling
        # nulling has no closed form: evaluated at the QFI-optimal time of the same source
        t = rate_star(src, "qfi", cav).t_star
        r = cfi_nulling(src, t, cav) / t
    else:
        opt = rate_star(src, p["receiver"], cav)
        t, r = opt.t_star, opt.rate_star
    row = dict(p)
    row.update(T_star_tau=t, R_star=r, advantage_over_vac_hom_dB=_db(r / ref))
    return row


def cmd_measurement(args):
    protos = [p for p in PROTOCOLS if not (args.no_null and p[2] == "null")]
    points = [dict(G_dB=g, N_T=n, gamma_tau=gt, gamma_idler_tau=gi, protocol=name, source=s, receiver=r)
              for g, n, gt, gi in itertools.product(args.g_db, args.nt, args.gamma_tau, args.gamma_idler_tau)
              for name, s, r in protos]
    return MEAS_COLUMNS, _run_grid(_measurement_point, points, args.threads)


# -- contour ------------------------------------------------------------------------------------------


def _contour_point(p):
    cav = CavityParams(p["gamma_tau"], p["gamma_idler_tau"], p["N_T"])
    src = _source(p["source"], p["G_dB"])
    base = rate_star(SourceSpec.vacuum(), "qfi", cav)
    opt = rate_star(src, "qfi", cav)
    pred = result1_region(cav, src.gain)
    row = dict(p)
    row.update(advantage_dB=_db(opt.rate_star / base.rate_star), T_star_gamma=opt.t_star * cav.gamma_tau,
               predicted_advantage=pred["smss_advantage" if p["source"] == "smss" else "tmss_advantage"])
    return row


def _gt_point(p):
    cav = CavityParams(p["gamma_tau"], p["gamma_idler_tau"], p["N_T"])
    src = _source(p["source"], p["G_dB"])
    base = rate_star(SourceSpec.vacuum(), "qfi", cav)
    row = dict(p)
    row.update(rate_advantage_dB=_db(float(rate(src, "qfi", p["T_tau"], cav)) / base.rate_star))
    return row


def _mark_boundary(rows, key, shape):
    """Flag grid cells whose advantage sign differs from a 4-neighbour."""
    vals = np.array([r.get(key, np.nan) for r in rows], dtype=float).reshape(shape)
    sign = np.sign(vals)
    flag = np.zeros(shape, dtype=bool)
    for axis in (0, 1):
        d = np.diff(sign, axis=axis) != 0
        lo = [slice(None)] * 2
        hi = [slice(None)] * 2
        lo[axis], hi[axis] = slice(0, -1), slice(1, None)
        flag[tuple(lo)] |= d
        flag[tuple(hi)] |= d
    for r, f in zip(rows, flag.reshape(-1)):
        r["boundary"] = bool(f)


def cmd_contour(args):
    if args.kind == "gamma-nt":
        ys, xs = args.nt, args.gamma_tau
        points = [dict(source=args.source, G_dB=args.g_db[0], gamma_tau=x, N_T=y,
                       gamma_idler_tau=args.gamma_idler_tau[0]) for y in ys for x in xs]
        rows = _run_grid(_contour_point, points, args.threads)
        if rows:
            _mark_boundary(rows, "advantage_dB", (len(ys), len(xs)))
        cols = ["source", "G_dB", "gamma_tau", "N_T", "gamma_idler_tau", "advantage_dB", "T_star_gamma",
                "predicted_advantage", "boundary", "error"]
        return cols, rows
    ts = args.t_tau
    points = [dict(source=args.source, G_dB=g, T_tau=t, gamma_tau=args.gamma_tau[0], N_T=args.nt[0],
                   gamma_idler_tau=args.gamma_idler_tau[0]) for g in args.g_db for t in ts]
    rows = _run_grid(_gt_point, points, args.threads)
    if rows:
        _mark_boundary(rows, "rate_advantage_dB", (len(args.g_db), len(ts)))
    cols = ["source", "G_dB", "T_tau", "gamma_tau", "N_T", "gamma_idler_tau", "rate_advantage_dB", "boundary", "error"]
    return cols, rows


# -- scan rate ------------------------------------------------------------------------------------------


def _scanrate_point(p):
    from .scanrate import scan_rate_incavity, scan_rate_inputoutput
    cav = CavityParams(p["gamma_tau"], p["gamma_idler_tau"], p["N_T"])
    src = _source(p["source"], p["G_dB"])
    k = scan_rate_incavity(src, None, cav).value
    j = scan_rate_inputoutput(cav).value
    row = dict(p)
    row.update(K=k, J=j, ratio_dB=_db(k / j))
    return row


def cmd_scanrate(args):
    points = [dict(source=args.source, G_dB=g, gamma_tau=gt, N_T=n, gamma_idler_tau=gi)
              for g, n, gi, gt in itertools.product(args.g_db, args.nt, args.gamma_idler_tau, args.gamma_tau)]
    cols = ["source", "G_dB", "gamma_tau", "N_T", "gamma_idler_tau", "K", "J", "ratio_dB", "error"]
    return cols, _run_grid(_scanrate_point, points, args.threads)


# -- fisher vs alpha -----------------------------------------------------------------------------------------


def _alpha_point(p):
    from .receivers import (PhaseModelParams, gaussian_model_qfi, phase_averaged_fisher,
                            vacuum_homodyne_normalizer)
    gain = 10.0 ** (p["G_dB"] / 10.0)
    n_s = (gain - 1.0) ** 2 / (4.0 * gain)
    params = PhaseModelParams(p["kappa"], p["N_B"], n_s, p["alpha"])
    row = dict(p)
    row.update(
        FI_SMSS_null=phase_averaged_fisher(params, p["n_max"], probe="smss"),
        FI_TMSS_null=phase_averaged_fisher(params, p["n_max"], probe="tmss"),
        FI_QFI_gaussian_SMSS=gaussian_model_qfi(params, "smss"),
        FI_QFI_gaussian_TMSS=gaussian_model_qfi(params, "tmss"),
        normalizer=vacuum_homodyne_normalizer(params),
    )
    return row


def cmd_fisher_alpha(args):
    points = [dict(kappa=k, N_B=args.nb, G_dB=args.g_db[0], alpha=args.alpha, n_max=args.n_max)
              for k in args.kappa]
    cols = ["kappa", "N_B", "G_dB", "alpha", "FI_SMSS_null", "FI_TMSS_null", "FI_QFI_gaussian_SMSS",
            "FI_QFI_gaussian_TMSS", "normalizer", "error"]
    return cols, _run_grid(_alpha_point, points, args.threads)


# -- selfcheck ---------------------------------------------------------------------------------------------


def cmd_selfcheck(args):
    from .selfcheck import run_checks
    results = run_checks(fast=args.fast)
    out = sys.stdout
    for name, ok, detail in results:
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    n_fail = sum(not ok for _, ok, _ in results)
    out.write(f"{len(results) - n_fail}/{len(results)} checks passed\n")
    return 0 if n_fail == 0 else 1


# -- argument handling -------------------------------------------------------------------------------------


GRID_KEYS = ("g_db", "nt", "gamma_tau", "gamma_idler_tau", "omega_tau", "kappa", "t_tau")


def _common(p, sources=("vacuum", "smss", "tmss")):
    p.add_argument("--source", choices=sources, default=sources[min(1, len(sources) - 1)])
    p.add_argument("--gamma-tau", default="1e-4", help="Gamma tau_A (grid syntax allowed)")
    p.add_argument("--gamma-idler-tau", default="0", help="Gamma_idler tau_A (grid syntax allowed)")
    p.add_argument("--nt", default="1e-2", help="thermal occupation N_T (grid syntax allowed)")
    p.add_argument("--g-db", default="20", help="squeezing gain in dB (grid syntax allowed)")
    p.add_argument("--out", default="-", help="output path or '-' for stdout")
    p.add_argument("--tol", type=float, default=1e-6, help="relative tolerance of the T refinement")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", default=None, help="file of key=value lines (flags override it)")
    p.add_argument("--strict", action="store_true", help="exit 3 if any grid point fails")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="axionqfi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"axionqfi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("advantage", help="T-optimized rate advantage over vacuum vs squeezing gain")
    _common(p)
    p.add_argument("--receiver", choices=["qfi", "hom", "het", "bell", "null"], default="qfi")
    p.add_argument("--omega-tau", default="0", help="detuning omega_A tau_A (grid syntax allowed)")
    p.add_argument("--fixed-t", default="opt", help="opt | vacuum-opt | T/tau_A value")
    p.add_argument("--asymptotics", action="store_true", help="append leading-order prediction columns")
    p.set_defaults(func=cmd_advantage)

    p = sub.add_parser("measurement", help="per-receiver rates normalized to vacuum homodyne")
    _common(p)
    p.add_argument("--no-null", action="store_true", help="skip the (slow) nulling receivers")
    p.set_defaults(func=cmd_measurement)

    p = sub.add_parser("contour", help="advantage over a (Gamma tau_A, N_T) or (G, T) grid")
    _common(p, sources=("smss", "tmss"))
    p.add_argument("--kind", choices=["gamma-nt", "g-t"], default="gamma-nt")
    p.add_argument("--t-tau", default="1e-4:41:1e2:log", help="T/tau_A grid for --kind g-t")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("scanrate", help="in-cavity scan rate K vs input-output J")
    _common(p, sources=("vacuum", "smss", "tmss"))
    p.set_defaults(func=cmd_scanrate, source="vacuum", nt="1e-4", gamma_tau="1e-6:13:1e3:log")

    p = sub.add_parser("fisher-alpha", help="Fisher information on alpha vs transmissivity (random-phase model)")
    p.add_argument("--kappa", default="0.5:0.05:1", help="transmissivity grid")
    p.add_argument("--nb", type=float, default=1e-4, help="added thermal photons N_B")
    p.add_argument("--g-db", default="10", help="probe squeezing gain in dB")
    p.add_argument("--alpha", type=float, default=1e-2, help="displacement amplitude |alpha|")
    p.add_argument("--n-max", type=int, default=24, help="photon-number cutoff")
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", default=None)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_fisher_alpha)

    p = sub.add_parser("selfcheck", help="run the oracle cross-check suite")
    p.add_argument("--fast", action="store_true", help="quick subset (< 10 s)")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def read_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{i}: expected key=value")
            k, v = line.split("=", 1)
            cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for a in sub._actions:
            if a.dest in cfg and a.type is not None and a.dest not in GRID_KEYS:
                cfg[a.dest] = a.type(cfg[a.dest])
            if a.dest in cfg and isinstance(a, argparse._StoreTrueAction):
                cfg[a.dest] = cfg[a.dest].lower() in ("1", "true", "yes")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    for key in GRID_KEYS:
        if hasattr(args, key):
            setattr(args, key, parse_grid(getattr(args, key)))
    if getattr(args, "fixed_t", None) not in (None, "opt", "vacuum-opt"):
        try:
            if not float(args.fixed_t) > 0:
                raise ValueError
        except ValueError as exc:
            raise UsageError("--fixed-t must be opt, vacuum-opt or a positive number") from exc
    if args.command == "advantage":
        try:
            check_pair(_source(args.source, 0.0), args.receiver)
        except MeasurementModelError as exc:
            raise UsageError(str(exc)) from exc
    return args


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"axionqfi: error: {exc}\n")
        return EXIT_USAGE
    if args.command == "selfcheck":
        return args.func(args)
    try:
        columns, rows = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"axionqfi: error: {exc}\n")
        return EXIT_USAGE
    n_err = sum(1 for r in rows if r.get("error"))
    if args.out == "-":
        write_csv(sys.stdout, args, args.command, columns, rows)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(fh, args, args.command, columns, rows)
    if n_err:
        sys.stderr.write(f"axionqfi: warning: {n_err} grid point(s) failed\n")
        if args.strict:
            return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
