"""Mesh and grid convergence tables.

``sphere``: relative error of the first 24 nonzero cotangent-Laplacian
eigenvalues on the icosphere hierarchy against l(l+1).
``bps``: residuals of the finite-difference monopole checks on nested grids.

    python3 scripts/convergence_study.py sphere
    python3 scripts/convergence_study.py bps --n-max 65 --levels 3
"""

from __future__ import annotations

import argparse
import math
from pathlib import Path

import numpy as np

from monopole_vdim.bps import verify_bps
from monopole_vdim.mesh import dec_function_spectrum, load_mesh

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def sphere_study(levels):
    exact = np.array([l * (l + 1) for l in range(1, 5) for _ in range(2 * l + 1)], dtype=float)
    previous = None
    print(f"{'level':>5} {'vertices':>9} {'max rel err':>12} {'order':>6}")
    for level in levels:
        mesh = load_mesh(DATA / f"icosphere_L{level}.off")
        table = dec_function_spectrum(mesh, min(40, len(mesh.vertices)))
        values = [e.eigenvalue for e in table.nonzero() for _ in range(e.multiplicity)][:24]
        if len(values) < 24:
            print(f"{level:>5} {len(mesh.vertices):>9}  (too coarse for 24 eigenvalues)")
            continue
        err = float(np.max(np.abs(np.array(values) - exact) / exact))
        order = "" if previous is None else f"{math.log2(previous / err):6.2f}"
        print(f"{level:>5} {len(mesh.vertices):>9} {err:>12.4%} {order:>6}")
        previous = err


def bps_study(radius, n_max, levels):
    rep = verify_bps(radius, n_max, levels, with_charge=False)
    keys = ["bogomolny_residual", "chain_residual", "weitzenbock_residual0", "weitzenbock_residual2"]
    print("grid    " + "  ".join(f"{k:>22}" for k in keys))
    for i, n in enumerate(rep["grid"]):
        print(f"{n:<7} " + "  ".join(f"{rep[k][i]:>22.6g}" for k in keys))
    print("ratio   " + "  ".join(f"{', '.join(f'{r:.3f}' for r in rep['convergence_rates'][k]):>22}"
                                  for k in keys))


def main(argv=None):
    parser = argparse.ArgumentParser(description="convergence tables")
    sub = parser.add_subparsers(dest="study", required=True)
    p = sub.add_parser("sphere")
    p.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4])
    p = sub.add_parser("bps")
    p.add_argument("--radius", type=float, default=8.0)
    p.add_argument("--n-max", type=int, default=65)
    p.add_argument("--levels", type=int, default=2)
    args = parser.parse_args(argv)
    if args.study == "sphere":
        sphere_study(args.levels)
    else:
        bps_study(args.radius, args.n_max, args.levels)


if __name__ == "__main__":
    main()
