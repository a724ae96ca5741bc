"""Draw the indicial roots and the defect step function for a configuration.

Prints the ASCII number line and, with ``--png``, saves a two-panel figure
(roots on top, vdim(alpha) below). The figure needs matplotlib, which is not
a package dependency.

    python3 scripts/plot_bspec.py configs/torus.json --png torus.png
"""

from __future__ import annotations

import argparse

import numpy as np

from monopole_vdim.config import load_config
from monopole_vdim.index import DefectProfile, RootError, defect, topological_index
from monopole_vdim.indicial import bspec, number_line


def vdim_curve(profile: DefectProfile, top: int, cutoff: float, samples: int = 2001):
    alphas = np.linspace(-cutoff, cutoff, samples)[1:-1]
    values = []
    for a in alphas:
        try:
            values.append(top + defect(profile, float(a)))
        except RootError:
            values.append(np.nan)
    return alphas, np.array(values, dtype=float)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config")
    parser.add_argument("--cutoff", type=float, help="largest |root| (default: config value)")
    parser.add_argument("--png", help="save a figure to this path")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    cutoff = args.cutoff or cfg.root_cutoff
    roots = bspec(cfg.surface, cutoff)
    print(number_line(roots, cutoff))
    if not args.png:
        return

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    profile = DefectProfile.from_roots(roots, cutoff + 1e-9)
    alphas, values = vdim_curve(profile, topological_index(cfg.surface), cutoff)
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 5),
                                      gridspec_kw={"height_ratios": [1, 2]})
    for r in roots:
        top.vlines(r.value, 0, r.multiplicity, color="C3" if r.topological else "C0", lw=2)
    top.set_ylabel("J(r)")
    top.set_title("indicial roots (red: topological contribution)")
    bottom.step(alphas, values, where="mid")
    bottom.set_xlabel("alpha")
    bottom.set_ylabel("vdim")
    bottom.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.png, dpi=150)
    print(f"wrote {args.png}")


if __name__ == "__main__":
    main()
