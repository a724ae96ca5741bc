import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monopole_vdim.boundary import (
    BoundarySurface,
    FlatTorus,
    MeshMetric,
    RoundSphere,
    SurfaceComponent,
    betti,
    component_spectrum,
    sphere_spectrum,
    surface_spectrum,
    torus_spectrum,
)
from monopole_vdim.mesh import MeshError
from monopole_vdim.spectrum import SpectrumEntry, SpectrumTable, cluster_eigenvalues, merge_tables

TWO_PI = 2 * math.pi


def sphere(charge=1, radius=1.0, scale=1.0):
    return SurfaceComponent(0, charge, RoundSphere(radius), scale)


def torus(charge=1, lattice=((TWO_PI, 0), (0, TWO_PI)), scale=1.0):
    return SurfaceComponent(1, charge, FlatTorus(lattice), scale)


def test_betti_examples():
    assert betti(BoundarySurface([sphere()])) == (1, 0, 1)
    assert betti(BoundarySurface([torus()])) == (1, 2, 1)
    g2 = SurfaceComponent(2, 0, MeshMetric("unused.off"))
    assert betti(BoundarySurface([sphere(), g2])) == (2, 4, 2)


def test_component_invariants():
    with pytest.raises(ValueError):
        SurfaceComponent(1, 0, RoundSphere(1.0))
    with pytest.raises(ValueError):
        SurfaceComponent(0, 0, FlatTorus())
    with pytest.raises(ValueError):
        sphere(scale=0.0)
    with pytest.raises(ValueError):
        BoundarySurface([])


def test_sphere_spectrum():
    table = sphere_spectrum(1.0, 20)
    assert [(e.eigenvalue, e.multiplicity) for e in table.entries] == [
        (0, 1), (2, 3), (6, 5), (12, 7), (20, 9)]
    assert sphere_spectrum(2.0, 1.0).nonzero()[0].eigenvalue == 0.5


def _brute_force_square_torus(cutoff):
    counts = Counter(p * p + q * q for p in range(-10, 11) for q in range(-10, 11)
                     if p * p + q * q <= cutoff)
    return sorted(counts.items())


def test_square_torus_spectrum_matches_enumeration():
    table = torus_spectrum(((TWO_PI, 0), (0, TWO_PI)), 26)
    got = [(round(e.eigenvalue, 9), e.multiplicity) for e in table.entries]
    assert got == _brute_force_square_torus(26)
    assert got[1:5] == [(1, 4), (2, 4), (4, 4), (5, 8)]


def test_unit_lattice_torus():
    table = torus_spectrum(((1, 0), (0, 1)), 50)
    assert math.isclose(table.nonzero()[0].eigenvalue, 4 * math.pi**2)


def test_torus_below_first_eigenvalue():
    table = torus_spectrum(((TWO_PI, 0), (0, TWO_PI)), 0.5)
    assert [(e.eigenvalue, e.multiplicity) for e in table.entries] == [(0, 1)]


def test_singular_lattice():
    with pytest.raises(ValueError, match="singular"):
        torus_spectrum(((1, 2), (2, 4)), 10)


def test_skew_lattice_against_enumeration():
    lattice = np.array([[3.0, 1.0], [0.0, 2.0]])
    table = torus_spectrum(lattice, 30)
    dual = np.linalg.inv(lattice).T
    vals = [4 * math.pi**2 * float(np.sum((dual @ [p, q]) ** 2))
            for p in range(-30, 31) for q in range(-30, 31)]
    expected = cluster_eigenvalues([v for v in vals if v <= 30], 1e-6)
    assert [(round(v, 8), m) for v, m in expected] == [
        (round(e.eigenvalue, 8), e.multiplicity) for e in table.entries]


@given(st.floats(min_value=0.05, max_value=20))
def test_area_scale_analytic(c):
    base = component_spectrum(sphere(), 30 / c)
    scaled = component_spectrum(sphere(scale=c), 30 / c / c)
    for a, b in zip(base.entries, scaled.entries):
        assert b.eigenvalue == pytest.approx(a.eigenvalue / c, rel=1e-12)
        assert a.multiplicity == b.multiplicity


@given(st.floats(min_value=0.1, max_value=10))
def test_area_scale_torus(c):
    base = component_spectrum(torus(), 10)
    scaled = component_spectrum(torus(scale=c), 10 / c)
    assert [e.multiplicity for e in base.entries] == [e.multiplicity for e in scaled.entries]
    for a, b in zip(base.entries, scaled.entries):
        assert b.eigenvalue == pytest.approx(a.eigenvalue / c, rel=1e-12)


def test_disjoint_union_is_sorted_merge():
    surface = BoundarySurface([sphere(), torus()])
    merged = surface_spectrum(surface, 7)
    parts = sorted([(e.eigenvalue, e.multiplicity) for e in sphere_spectrum(1, 7).entries]
                   + [(e.eigenvalue, e.multiplicity)
                      for e in torus_spectrum(((TWO_PI, 0), (0, TWO_PI)), 7).entries])
    assert [(e.eigenvalue, e.multiplicity) for e in merged.entries] == parts
    assert merged.zero_multiplicity() == 2
    assert {e.component for e in merged.entries} == {0, 1}


def test_spectrum_table_validation_and_csv():
    with pytest.raises(ValueError):
        SpectrumTable((SpectrumEntry(-1.0, 1),), 1.0)
    with pytest.raises(ValueError):
        merge_tables([])
    csv = sphere_spectrum(1, 6).to_csv().splitlines()
    assert csv[0] == "component,eigenvalue,multiplicity"
    assert csv[2] == "0,2,3"


def test_mesh_component(data_dir):
    comp = SurfaceComponent(0, 1, MeshMetric(str(data_dir / "icosphere_L4.off")))
    table = component_spectrum(comp, 8.0)
    assert table.cutoff == 8.0
    assert [e.multiplicity for e in table.entries] == [1, 3, 5]
    wrong = SurfaceComponent(1, 1, MeshMetric(str(data_dir / "icosphere_L4.off")))
    with pytest.raises(MeshError, match="genus"):
        component_spectrum(wrong, 8.0)
    two = SurfaceComponent(0, 1, MeshMetric(str(data_dir / "two_spheres.off")))
    with pytest.raises(MeshError, match="components"):
        component_spectrum(two, 8.0)


def test_mesh_area_scale(data_dir):
    path = str(data_dir / "icosphere_L3.off")
    base = component_spectrum(SurfaceComponent(0, 0, MeshMetric(path)), 7.0)
    scaled = component_spectrum(SurfaceComponent(0, 0, MeshMetric(path), 2.0), 3.5)
    for a, b in zip(base.entries, scaled.entries):
        assert b.eigenvalue == pytest.approx(a.eigenvalue / 2, rel=1e-9)
