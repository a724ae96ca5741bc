"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run under pytest (the lines are collected into the terminal summary) or
directly with ``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from monopole_vdim.boundary import BoundarySurface, FlatTorus, MeshMetric, RoundSphere, SurfaceComponent, betti
from monopole_vdim.bps import symbol_exactness, verify_bps
from monopole_vdim.identities import verify_clifford
from monopole_vdim.index import DefectProfile, defect, epsilon0, leading_asymptotics, vdim
from monopole_vdim.indicial import Geometric, bspec, indicial_matrix, multiplicity_at, nullspace_oracle
from monopole_vdim.mesh import dec_function_spectrum, load_mesh

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES  # noqa: E402

DATA = Path(__file__).parent / "data"
SPHERE = BoundarySurface([SurfaceComponent(0, 1, RoundSphere(1.0))])
TORUS = BoundarySurface([SurfaceComponent(1, 1, FlatTorus())])
GENUS2 = BoundarySurface([SurfaceComponent(2, 1, MeshMetric(str(DATA / "genus2.off")))])


def report(number: int, ok: bool, detail: str, elapsed: float, budget: float | None = None):
    timing = f"{elapsed:.2f}s" + (f" (budget {budget:g}s)" if budget is not None else "")
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}  [{timing}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_r3_benchmark():
    t0 = time.perf_counter()
    results = {(k, a): vdim(BoundarySurface([SurfaceComponent(0, k, RoundSphere(1.0))]), a).vdim
               for k in (1, 2, 3) for a in (-0.5, 0.5)}
    elapsed = time.perf_counter() - t0
    ok = all(v == 4 * k for (k, _), v in results.items()) and elapsed < 1.0
    report(1, ok, f"vdim(S^2, k, +-0.5) = {sorted(set(results.values()))} for k = 1, 2, 3", elapsed, 1.0)


def test_criterion_2_sphere_bspec():
    t0 = time.perf_counter()
    roots = [r for r in bspec(SPHERE, 5.5) if abs(r.value) <= 5.5]
    values = [r.value for r in roots]
    expected = [float(v) for v in range(-5, 6) if v != 0]
    worst = 0.0
    for root in roots:
        for c in root.contributions:
            if isinstance(c, Geometric):
                det = indicial_matrix(2, c.degree, c.eigenvalue, c.family, root.value).determinant
                worst = max(worst, abs(det))
    elapsed = time.perf_counter() - t0
    ok = values == expected and worst < 1e-9
    report(2, ok, f"roots {[int(v) for v in values]}, max |det| {worst:.1e}", elapsed)


def test_criterion_3_torus_window():
    t0 = time.perf_counter()
    eps = epsilon0(bspec(TORUS))
    kbar = sum(TORUS.charges)
    left = {vdim(TORUS, -f * eps).vdim for f in (0.01, 0.5, 0.99)}
    right = {vdim(TORUS, f * eps).vdim for f in (0.01, 0.5, 0.99)}
    elapsed = time.perf_counter() - t0
    golden = (math.sqrt(5) - 1) / 2
    ok = (abs(eps - golden) <= 1e-9 and len(left) == len(right) == 1
          and left.pop() - right.pop() == betti(TORUS)[1] == 2
          and vdim(TORUS, -0.3).vdim == 4 * kbar + 1 and vdim(TORUS, 0.3).vdim == 4 * kbar - 1
          and elapsed < 1.0)
    report(3, ok, f"eps0 = {eps:.12f}, vdim = {4 * kbar + 1} | {4 * kbar - 1}", elapsed, 1.0)


def test_criterion_4_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240611)
    mismatches = []
    checked = 0
    for name, surface in (("sphere", SPHERE), ("torus", TORUS), ("genus2", GENUS2)):
        roots = bspec(surface, 2.5)
        for root in roots:
            got = nullspace_oracle(surface, root.value)
            checked += 1
            if got != root.multiplicity:
                mismatches.append((name, root.value, got, root.multiplicity))
        values = np.array([r.value for r in roots])
        points = []
        while len(points) < 20:
            x = rng.uniform(-2.5, 2.5)
            if np.min(np.abs(values - x)) > 1e-3:
                points.append(x)
        for x in points:
            checked += 1
            if nullspace_oracle(surface, x) != 0 or multiplicity_at(roots, x) != 0:
                mismatches.append((name, x, "non-root"))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 30.0
    report(4, ok, f"{checked} evaluations, {len(mismatches)} mismatches", elapsed, 30.0)


def test_criterion_5_defect_properties():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    failures = 0
    total = 0
    for surface in (SPHERE, TORUS, GENUS2):
        cutoff = 2.5
        profile = DefectProfile.from_roots(bspec(surface, cutoff), cutoff)
        roots = np.array(profile.roots)
        alphas = []
        while len(alphas) < 50:
            a = rng.uniform(-cutoff + 0.01, cutoff - 0.01)
            if np.min(np.abs(np.abs(roots) - abs(a))) > 1e-6:
                alphas.append(a)
        for a in alphas:
            total += 1
            d = defect(profile, a)
            failures += not (isinstance(d, int) and defect(profile, -a) == -d)
        for r, j in profile.jumps:
            if abs(r) + 1e-4 < cutoff:
                total += 1
                failures += defect(profile, r - 1e-4) - defect(profile, r + 1e-4) != j
    elapsed = time.perf_counter() - t0
    report(5, failures == 0, f"{total} antisymmetry and jump checks, {failures} failures", elapsed)


def _sphere_errors(level: int) -> np.ndarray:
    mesh = load_mesh(DATA / f"icosphere_L{level}.off")
    table = dec_function_spectrum(mesh, 40)
    values = [e.eigenvalue for e in table.nonzero() for _ in range(e.multiplicity)][:24]
    exact = [l * (l + 1) for l in range(1, 5) for _ in range(2 * l + 1)]
    return np.abs(np.array(values) - exact) / exact


def test_criterion_6_dec_convergence():
    t0 = time.perf_counter()
    e3 = _sphere_errors(3).max()
    e4 = _sphere_errors(4).max()
    order = math.log2(e3 / e4)
    elapsed = time.perf_counter() - t0
    ok = e4 < 0.02 and order >= 1.5 and elapsed < 60.0
    report(6, ok, f"max rel error L3 {e3:.2%}, L4 {e4:.2%}, order {order:.2f}", elapsed, 60.0)


def test_criterion_7_bps():
    t0 = time.perf_counter()
    rep = verify_bps(8.0, 65, 2, with_charge=False)
    rates = rep["convergence_rates"]
    xis = [(1, 0, 0), (0, 1, 0), (2, -3, 5), (Fraction(1, 3), Fraction(-7, 2), 4)]
    exact = all(symbol_exactness(xi).composite_zero for xi in xis)
    elapsed = time.perf_counter() - t0
    bog, chain, weitz = (rates[k][0] for k in ("bogomolny_residual", "chain_residual", "weitzenbock_residual0"))
    ok = 3.5 <= bog <= 4.5 and chain >= 3 and weitz >= 3 and exact and elapsed < 300
    report(7, ok, f"ratios bogomolny {bog:.3f}, chain {chain:.3f}, weitzenbock {weitz:.3f}; "
                  f"symbol composite zero {exact}", elapsed, 300.0)


def test_criterion_8_clifford():
    t0 = time.perf_counter()
    rep = verify_clifford(3)
    elapsed = time.perf_counter() - t0
    names = {c.name for c in rep.checks}
    required = {"volume_element_squares_to_one", "boundary_clifford_action", "connection_correction_is_minus_N"}
    ok = rep.passed and required <= names and elapsed < 1.0
    report(8, ok, f"{len(rep.checks)} exact identity checks at n = 3", elapsed, 1.0)


def test_criterion_9_leading_asymptotics():
    t0 = time.perf_counter()
    sphere = leading_asymptotics(bspec(SPHERE), 0.5)
    torus = leading_asymptotics(bspec(TORUS), -0.3)
    elapsed = time.perf_counter() - t0
    ok = sphere == (2, 3) and torus == (1, 2)
    report(9, ok, f"sphere {sphere}, torus {torus}", elapsed)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
