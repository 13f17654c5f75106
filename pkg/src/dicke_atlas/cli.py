"""Command-line front end.

Subcommands::

    solve       classify one parameter point (JSON on stdout)
    sweep       two-parameter phase grid (CSV file)
    boundaries  critical couplings as functions of t (CSV file)
    symmetry    group relations, invariances, symmetry table, phase exchange (JSON)
    exact       finite-N exact diagonalization against mean field (JSON)

Exit codes: 0 success, 2 invalid flags or axes, 3 convergence failure,
4 failed check, 5 Hilbert-space dimension guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from typing import List, Optional, Sequence

from . import __version__
from . import analytic
from . import symmetry as sym
from .errors import AtlasError, ConvergenceError, DimensionError
from .exact import MAX_DIMENSION, EdConfig, finite_size_scan, initial_cutoff
from .landscape import energy_at
from .model import ModelParams
from .oracle import SearchSpec
from .phases import (DEFAULT_VERIFY_EVERY, VERIFY_TOL, AxisSpec, PhaseReport, classify,
                     sweep as run_sweep)

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_CHECK, EXIT_DIMENSION = 0, 2, 3, 4, 5
DEFAULT_SEED = 0xD1CE
SIG_DIGITS = 12

SWEEP_HEADER = ("lambda", "kappa", "omega", "Omega", "U", "t", "phase", "n_photon", "jz",
                "jx", "jy", "energy", "m1", "m2", "m3", "m4")
BOUNDARY_HEADER = ("t", "curve", "branch", "lambda_critical")


class UsageError(AtlasError):
    """Flag combination that argparse cannot reject on its own."""


# --------------------------------------------------------------------------
# number formatting


def num(x: Optional[float]) -> Optional[float]:
    """Round to 12 significant digits; non-finite values become None (JSON null)."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    y = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if y == 0.0 else y


def fmt(x: Optional[float]) -> str:
    """CSV text of a number: shortest round-trip form of the 12-digit value."""
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return repr(num(x))


def _params_doc(p: ModelParams) -> dict:
    return {k: num(v) for k, v in p.as_dict().items()}


def manifest(command: str, args: argparse.Namespace, started: float, **extra) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    doc = {"command": command, "flags": flags, "tool": "dicke-atlas", "version": __version__}
    doc.update(extra)
    doc["wall_time_s"] = round(time.perf_counter() - started, 6)
    return doc


def _emit_json(doc: dict, stream=None):
    stream = stream or sys.stdout
    json.dump(doc, stream, indent=2, allow_nan=False)
    stream.write("\n")


def _write_atomic(path: str, text: str):
    """Write via a temporary file in the target directory and rename on success."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_sidecar(out: str, doc: dict):
    _write_atomic(out + ".manifest.json", json.dumps(doc, indent=2) + "\n")


# --------------------------------------------------------------------------
# solve


def _point(args) -> ModelParams:
    try:
        return ModelParams(args.omega, args.Omega, args.lam, args.kappa, args.U)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def report_document(report: PhaseReport) -> dict:
    p = report.params
    minimizers = [{"rho": num(s.rho), "mu": num(s.mu), "theta": num(s.theta), "eta": num(s.eta),
                   "energy": num(energy_at(p, *s.as_tuple()))}
                  for s in report.minimizers.states]
    m1, m2, m3, m4 = report.stability.eigenvalues
    return {
        "params": _params_doc(p),
        "phase": report.label.value,
        "ground_energy": num(report.ground_energy),
        "np_stable": report.np_stable,
        "sp_branch": report.sp_branch.value if report.sp_branch else None,
        "degenerate_manifold": report.minimizers.degenerate_manifold,
        "minimizers": minimizers,
        "order_parameters": {k: num(v) for k, v in report.order_params.as_dict().items()},
        "hessian_eigenvalues": {"m1": num(m1), "m2": num(m2), "m3": num(m3), "m4": num(m4)},
        "stability": {"class": report.stability.stability_class.value,
                      "rank_reduced": report.stability.rank_reduced},
        "method": report.method,
    }


def cmd_solve(args, started) -> int:
    params = _point(args)
    report = classify(params, use_oracle=args.oracle)
    doc = report_document(report)
    spec = SearchSpec.default(params)
    doc["manifest"] = manifest("solve", args, started, search_spec=_spec_doc(spec))
    _emit_json(doc)
    return EXIT_OK


def _spec_doc(spec: SearchSpec) -> dict:
    return {k: (num(v) if isinstance(v, float) else v) for k, v in vars(spec).items()}


# --------------------------------------------------------------------------
# sweep


def _parse_axis(text: str) -> AxisSpec:
    name, sep, rest = text.partition(":")
    if not sep:
        raise UsageError(f"axis must look like name:start:stop:count, got {text!r}")
    return AxisSpec.parse(name, rest)


def sweep_rows(grid) -> List[List[str]]:
    rows = []
    for cell in grid.cells:
        p, o = cell.params, cell.order_params
        rows.append([fmt(p.lam), fmt(p.kappa), fmt(p.omega), fmt(p.Omega), fmt(p.U),
                     fmt(p.t), cell.label.value, fmt(o.n_photon), fmt(o.jz), fmt(o.jx),
                     fmt(o.jy), fmt(cell.ground_energy)] + [fmt(m) for m in cell.eigenvalues])
    return rows


def cmd_sweep(args, started) -> int:
    axis1, axis2 = _parse_axis(args.axis1), _parse_axis(args.axis2)
    fixed = _point(args)
    grid = run_sweep(fixed, axis1, axis2, verify=args.verify, verify_every=args.verify_every,
                     use_oracle=args.oracle, fixed_t=args.t)
    _write_atomic(args.out, _csv_text(SWEEP_HEADER, sweep_rows(grid)))
    _write_sidecar(args.out, manifest(
        "sweep", args, started, cells=len(grid.cells), verified_cells=list(grid.verified),
        verify_tol=VERIFY_TOL))
    return EXIT_OK


# --------------------------------------------------------------------------
# boundaries


def boundary_rows(omega: float, Omega: float, t_values) -> List[List[str]]:
    """Positive critical couplings per t (all curves are even in lambda).

    Curves: ``np_boundary`` (NP loses stability), ``sp_threshold`` (the SP
    branch selected by the sign of t appears) and ``coexistence`` (lower and
    upper edges of the p-(R)SP + NP band for t < 0).
    """
    rows = []
    for t in t_values:
        t = float(t)
        data = analytic.critical_couplings(ModelParams.from_t(omega, Omega, 1.0, t))
        np_edge = data.lambda_c_x if abs(1.0 + t) > 1e-12 else None
        if abs(t) < 1e-12:
            branch, sp_edge = analytic.SpBranch.DEG_LAMBDA, math.sqrt(omega * Omega)
        elif t > 0.0:
            branch, sp_edge = analytic.SpBranch.X, data.lambda_c_x
        else:
            branch, sp_edge = analytic.SpBranch.P, data.lambda_c_p
        if np_edge is not None:
            rows.append([fmt(t), "np_boundary", "NP", fmt(np_edge)])
        rows.append([fmt(t), "sp_threshold", branch.value, fmt(sp_edge)])
        if t < 0.0 and np_edge is not None and abs(t) >= 1e-12:
            rows.append([fmt(t), "coexistence", "lower", fmt(sp_edge)])
            rows.append([fmt(t), "coexistence", "upper", fmt(np_edge)])
    return rows


def cmd_boundaries(args, started) -> int:
    if args.omega <= 0.0 or args.Omega <= 0.0:
        raise UsageError("--omega and --Omega must be positive")
    axis = AxisSpec.parse("t", args.t_range)
    text = _csv_text(BOUNDARY_HEADER, boundary_rows(args.omega, args.Omega, axis.values()))
    if args.out:
        _write_atomic(args.out, text)
        _write_sidecar(args.out, manifest("boundaries", args, started))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# symmetry

_TABLE2_POINTS = [(0.2, 0.2), (1.0, 1.0), (-1.0, -1.0), (2.5, -2.5), (-2.5, 2.5),
                  (1.5, 0.0), (-1.5, 0.0), (0.0, 1.5), (0.0, -1.5)]
_EXCHANGE_POINTS = [("St", 2.5, -2.5), ("StPrime", 1.0, 1.0), ("St", 1.5, 0.0),
                    ("StPrime", 0.0, 1.5), ("St", -1.5, 0.0), ("StPrime", 0.0, -1.5)]
_TRANSFORMS = {"St": sym.ST, "StPrime": sym.STPRIME}


def _user_point(args) -> Optional[ModelParams]:
    if args.lam is None and args.kappa is None:
        return None
    return ModelParams(args.omega, args.Omega, args.lam or 0.0, args.kappa or 0.0, args.U)


def _check_relations(args, point) -> dict:
    out = {g: sym.check_coxeter_relations(g, seed=args.seed) for g in ("W", "Wprime")}
    return {"groups": out, "passed": all(out.values())}


def _check_invariance(args, point) -> dict:
    p = point or ModelParams(args.omega, args.Omega, 0.7, -0.3, 0.0)
    maxima = {str(tr): num(sym.energy_invariance(tr, p, args.samples, args.seed))
              for tr in (sym.PARITY, sym.SX, sym.SP, sym.C2, sym.V, sym.VPRIME)}
    lam = abs(p.lam) or 1.3
    kap = abs(p.kappa) or 1.3
    angles = [2.0 * math.pi * k / 32 for k in range(32)]
    on_tc = p.replace(kappa=0.0, lam=lam)
    on_anti = p.replace(lam=0.0, kappa=kap)
    maxima["U1(plus) on kappa=0"] = num(max(
        sym.energy_invariance(sym.U1(a, "plus"), on_tc, args.samples // 10 or 1, args.seed) for a in angles))
    maxima["U1(minus) on lambda=0"] = num(max(
        sym.energy_invariance(sym.U1(a, "minus"), on_anti, args.samples // 10 or 1, args.seed) for a in angles))
    return {"max_abs_delta": maxima, "tolerance": sym.ENERGY_TOL,
            "passed": all(v <= sym.ENERGY_TOL for v in maxima.values())}


def _check_table2(args, point) -> dict:
    points = [point] if point else [ModelParams(args.omega, args.Omega, l, k) for l, k in _TABLE2_POINTS]
    rows = []
    for p in points:
        row = sym.table2_row(p)
        rows.append({
            "params": _params_doc(p), "phase": row.phase.value, "status": row.status,
            "expected_state_fixed": list(row.expected) if row.expected else None,
            "verdicts": {k: v.as_dict() for k, v in row.verdicts.items()},
        })
    return {"columns": list(sym.TABLE2_COLUMNS), "rows": rows,
            "passed": all(r["status"] != "mismatch" for r in rows)}


def _check_exchange(args, point) -> dict:
    cases = ([(name, point) for name in _TRANSFORMS] if point else
             [(name, ModelParams(args.omega, args.Omega, l, k)) for name, l, k in _EXCHANGE_POINTS])
    results = []
    for name, p in cases:
        original, image, ok = sym.phase_exchange_check(_TRANSFORMS[name], p)
        results.append({"transform": name, "params": _params_doc(p), "original": original.value,
                        "image": image.value, "mapping_ok": ok})
    return {"cases": results, "passed": all(r["mapping_ok"] for r in results)}


_CHECKS = {"relations": _check_relations, "invariance": _check_invariance,
           "table2": _check_table2, "exchange": _check_exchange}


def cmd_symmetry(args, started) -> int:
    point = _user_point(args)
    if point is not None and point.U != 0.0 and args.check in ("table2", "exchange", "all"):
        raise UsageError("symmetry tables need U = 0")
    names = list(_CHECKS) if args.check == "all" else [args.check]
    checks = {name: _CHECKS[name](args, point) for name in names}
    passed = all(c["passed"] for c in checks.values())
    doc = {"checks": checks, "passed": passed,
           "manifest": manifest("symmetry", args, started)}
    _emit_json(doc)
    return EXIT_OK if passed else EXIT_CHECK


# --------------------------------------------------------------------------
# exact


def _n_list(args) -> List[int]:
    if args.N_list:
        try:
            values = [int(v) for v in args.N_list.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--N-list must be comma-separated integers, got {args.N_list!r}") from None
    elif args.N is not None:
        values = [args.N]
    else:
        raise UsageError("give --N or --N-list")
    if not values or any(v < 1 for v in values):
        raise UsageError("atom numbers must be positive")
    return values


def cmd_exact(args, started) -> int:
    params = _point(args)
    n_values = _n_list(args)
    if args.nmax is not None and args.nmax < 1:
        raise UsageError("--nmax must be positive")
    for N in n_values:
        n_max = args.nmax if args.nmax is not None else initial_cutoff(params, N)
        # the adaptive cutoff must be able to double at least once
        if (2 * n_max + 1) * (N + 1) > MAX_DIMENSION:
            raise DimensionError(
                f"N = {N}, n_max = {n_max}: doubled cutoff would exceed dimension {MAX_DIMENSION}")
    results = []
    for N in n_values:
        cfg = EdConfig(N=N, n_max=args.nmax) if args.nmax is not None else None
        results.extend(finite_size_scan(params, [N], cfg))
    mf = classify(params)
    mf_doc = {"ground_energy": num(mf.ground_energy), "phase": mf.label.value,
              "n_photon": num(mf.order_params.n_photon), "jz": num(mf.order_params.jz),
              "jperp2": num(mf.order_params.jx ** 2 + mf.order_params.jy ** 2)}
    rows = []
    for r in results:
        row = {k: (num(v) if isinstance(v, float) else v) for k, v in r.as_dict().items()}
        row["energy_gap"] = num(abs(r.e0_per_atom - mf.ground_energy))
        row["e0"] = num(r.e0_per_atom * r.N)
        rows.append(row)
    doc = {"params": _params_doc(params), "mean_field": mf_doc, "results": rows,
           "manifest": manifest("exact", args, started)}
    _emit_json(doc)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_point(p: argparse.ArgumentParser, required: bool = False):
    p.add_argument("--omega", type=float, default=1.0, help="cavity frequency (default 1)")
    p.add_argument("--Omega", type=float, default=1.0, help="atomic splitting (default 1)")
    p.add_argument("--lambda", dest="lam", type=float, required=required,
                   help="co-rotating coupling")
    p.add_argument("--kappa", type=float, required=required, help="counter-rotating coupling")
    p.add_argument("--U", type=float, default=0.0, help="nonlinear coupling (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dicke-atlas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED,
                       help="seed for sampled checks (default 0xD1CE)")
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "classify one parameter point")
    _add_point(p, required=True)
    p.add_argument("--oracle", action="store_true", help="use the variational oracle even at U = 0")

    p = add("sweep", cmd_sweep, "phase grid over two parameters, written as CSV")
    _add_point(p)
    p.set_defaults(lam=0.0, kappa=0.0)
    p.add_argument("--axis1", required=True, help="name:start:stop:count (outer loop)")
    p.add_argument("--axis2", required=True, help="name:start:stop:count (inner loop)")
    p.add_argument("--t", type=float, default=None, help="fix kappa = t * lambda in every cell")
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--verify", action="store_true", help="spot-check cells against the oracle")
    p.add_argument("--verify-every", type=int, default=DEFAULT_VERIFY_EVERY)
    p.add_argument("--oracle", action="store_true", help="solve every cell with the oracle")

    p = add("boundaries", cmd_boundaries, "critical couplings versus t, written as CSV")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--Omega", type=float, default=1.0)
    p.add_argument("--t-range", default="-3:3:121", help="start:stop:count (default -3:3:121)")
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")

    p = add("symmetry", cmd_symmetry, "symmetry audits")
    _add_point(p)
    p.add_argument("--check", choices=["relations", "invariance", "table2", "exchange", "all"],
                   default="all")
    p.add_argument("--samples", type=int, default=1000, help="random states per invariance check")

    p = add("exact", cmd_exact, "finite-N exact diagonalization")
    _add_point(p)
    p.set_defaults(lam=0.0, kappa=0.0)
    p.add_argument("--N", type=int, default=None, help="atom number")
    p.add_argument("--N-list", default=None, help="comma-separated atom numbers")
    p.add_argument("--nmax", type=int, default=None, help="starting photon cutoff")
    return parser


#: Options whose values may start with a minus sign ("-3:3:121").
_RANGE_OPTIONS = ("--t-range", "--axis1", "--axis2")


def _join_range_values(argv: Sequence[str]) -> List[str]:
    """Glue ``--t-range -3:3:121`` into ``--t-range=-3:3:121`` so argparse keeps the value."""
    out: List[str] = []
    it = iter(argv)
    for token in it:
        if token in _RANGE_OPTIONS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    started = time.perf_counter()
    parser = build_parser()
    args = parser.parse_args(_join_range_values(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args, started)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (AtlasError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
