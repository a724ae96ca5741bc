"""Command-line interface: ``monopole-vdim {roots,vdim,spectrum,verify-bps,verify-clifford}``.

Exit codes: 0 success, 1 failed check or internal error, 2 input error,
3 weight at an indicial root.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .boundary import surface_spectrum
from .config import ConfigError, RunConfig, load_config
from .index import DefectProfile, RootError, vdim
from .indicial import CutoffError, bspec, number_line, roots_to_csv
from .mesh import MeshError, SpectrumError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ROOT = 0, 1, 2, 3
SEED_ENV = "MONOPOLE_VDIM_SEED"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _write(path: str | Path, text: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def _output_path(cfg: RunConfig, explicit: str | None, suffix: str) -> str | None:
    if explicit:
        return explicit
    if cfg.output:
        return f"{cfg.output}{suffix}"
    return None


def _seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def cmd_roots(args) -> int:
    cfg = load_config(args.config)
    cutoff = args.cutoff if args.cutoff is not None else cfg.root_cutoff
    roots = bspec(cfg.surface, cutoff)
    csv_path = _output_path(cfg, args.csv, "_roots.csv")
    if csv_path:
        _write(csv_path, roots_to_csv(roots))
    if args.json:
        print(_dump_json({
            "root_cutoff": float(_fmt(cutoff)),
            "roots": [{"value": float(_fmt(r.value)), "multiplicity": r.multiplicity,
                       "topological": r.topological} for r in roots],
        }))
        return EXIT_OK
    width = max(len(_fmt(r.value)) for r in roots) if roots else 5
    print(f"{'root':>{width}}  mult  origin")
    for r in roots:
        kind = "topological" if r.topological else "geometric"
        if r.topological and len(r.contributions) > 1:
            kind = "topological+geometric"
        print(f"{_fmt(r.value):>{width}}  {r.multiplicity:>4}  {kind}")
    print()
    print(number_line(roots, cutoff))
    return EXIT_OK


def cmd_vdim(args) -> int:
    cfg = load_config(args.config)
    alpha = args.alpha if args.alpha is not None else cfg.alpha
    if alpha is None:
        raise ConfigError("no weight given: set 'alpha' in the config or pass --alpha")
    cutoff = args.cutoff if args.cutoff is not None else cfg.root_cutoff
    report = vdim(cfg.surface, alpha, cutoff, cfg.ricci_nonnegative, cfg.beta, cfg.k)
    json_text = report.to_json()
    json_path = _output_path(cfg, None, "_vdim.json")
    if json_path:
        _write(json_path, json_text + "\n")
    csv_path = _output_path(cfg, args.csv, "_defect.csv")
    if csv_path:
        profile = DefectProfile.from_roots(bspec(cfg.surface, cutoff), cutoff)
        _write(csv_path, profile.to_csv())
    print(json_text if args.json else report.table())
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    cutoff = args.cutoff if args.cutoff is not None else 20.0
    table = surface_spectrum(cfg.surface, cutoff)
    text = table.to_csv()
    csv_path = _output_path(cfg, args.csv, "_spectrum.csv")
    if csv_path:
        _write(csv_path, text)
    if args.json:
        print(_dump_json({
            "cutoff": float(_fmt(table.cutoff)),
            "entries": [{"component": e.component, "eigenvalue": float(_fmt(e.eigenvalue)),
                         "multiplicity": e.multiplicity} for e in table.complete()],
        }))
    else:
        sys.stdout.write(text)
    return EXIT_OK


BPS_BOUNDS = {
    "bogomolny_residual": (3.5, 4.5),
    "chain_residual": (3.0, math.inf),
    "weitzenbock_residual0": (3.0, math.inf),
}


def cmd_verify_bps(args) -> int:
    from .bps import bps_monopole, report_json, verify_bps, write_vtk

    report = verify_bps(args.radius, args.n, args.levels)
    checks = {}
    for key, (lo, hi) in BPS_BOUNDS.items():
        rates = report["convergence_rates"][key]
        checks[key] = bool(rates) and all(lo <= r <= hi for r in rates)
    checks["symbol_exactness"] = bool(report["symbol_exactness"])
    checks["gauge_consistency"] = report["gauge_consistency"] < 1e-12
    checks["coulomb_selfcheck"] = report["coulomb_selfcheck"] < 1e-10
    checks["potential_positivity"] = report["potential_positivity"] >= 0
    report["checks"] = checks
    if args.vtk:
        write_vtk(bps_monopole(args.radius, args.n), args.vtk)
    if args.json:
        print(report_json(report))
    else:
        print(f"grids {report['grid']} on [-{_fmt(args.radius)}, {_fmt(args.radius)}]^3")
        for key in ("bogomolny_residual", "chain_residual", "weitzenbock_residual0", "weitzenbock_residual2"):
            values = ", ".join(_fmt(v) for v in report[key])
            rates = ", ".join(_fmt(v) for v in report["convergence_rates"][key])
            print(f"{key:<24} {values}   ratios {rates}")
        for key, ok in checks.items():
            print(f"{'PASS' if ok else 'FAIL'}  {key}")
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_verify_clifford(args) -> int:
    from .identities import verify_clifford

    if args.n % 2 == 0:
        raise ConfigError(f"n odd required, got n={args.n}")
    report = verify_clifford(args.n, seed=_seed())
    if args.json:
        print(_dump_json(report.as_dict()))
    else:
        for check in report.checks:
            print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}")
            for failure in check.failures[:5]:
                print(f"      {failure}")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monopole-vdim",
        description="Virtual dimensions of monopole moduli spaces on scattering 3-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="indicial roots and number line")
    p.add_argument("--config", required=True)
    p.add_argument("--cutoff", type=float, help="largest |root| to resolve")
    p.add_argument("--csv", help="write the root table as CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("vdim", help="virtual dimension at a weight")
    p.add_argument("--config", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--cutoff", type=float, help="largest |root| to resolve")
    p.add_argument("--csv", help="write the defect step function as CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_vdim)

    p = sub.add_parser("spectrum", help="boundary Laplace spectrum as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--cutoff", type=float, help="largest eigenvalue (default 20)")
    p.add_argument("--csv", help="write to this path as well as stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify-bps", help="finite-difference checks on the charge-one monopole")
    p.add_argument("--radius", type=float, default=8.0)
    p.add_argument("--n", type=int, default=65, help="points per axis on the finest grid")
    p.add_argument("--levels", type=int, default=2, help="number of nested grids")
    p.add_argument("--vtk", help="dump |Phi| on the finest grid")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_bps)

    p = sub.add_parser("verify-clifford", help="exact Clifford identities")
    p.add_argument("--n", type=int, default=3, help="odd dimension of the manifold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_clifford)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROOT
    except (ConfigError, MeshError, CutoffError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, SpectrumError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
