import json
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from monopole_vdim.boundary import BoundarySurface, FlatTorus, MeshMetric, RoundSphere, SurfaceComponent, betti
from monopole_vdim.index import (
    DefectProfile,
    RootError,
    VdimReport,
    defect,
    epsilon0,
    index_jump,
    leading_asymptotics,
    surjectivity_advisory,
    topological_index,
    vdim,
    volume_scaling_advisory,
)
from monopole_vdim.indicial import CutoffError, bspec

GOLDEN = (math.sqrt(5) - 1) / 2


def sphere(k=1, scale=1.0):
    return BoundarySurface([SurfaceComponent(0, k, RoundSphere(1.0), scale)])


def torus(k=1, scale=1.0):
    return BoundarySurface([SurfaceComponent(1, k, FlatTorus(), scale)])


SPHERE_PROFILE = DefectProfile.from_roots(bspec(sphere(), 5.5), 5.5)
TORUS_PROFILE = DefectProfile.from_roots(bspec(torus(), 2.5), 2.5)
SKEW_PROFILE = DefectProfile.from_roots(
    bspec(BoundarySurface([SurfaceComponent(1, 0, FlatTorus(((5.0, 1.0), (0.0, 4.0))))]), 2.5), 2.5)
PROFILES = [SPHERE_PROFILE, TORUS_PROFILE, SKEW_PROFILE]


def test_topological_index():
    assert topological_index(sphere(1)) == 4
    two = BoundarySurface([SurfaceComponent(0, 2, RoundSphere()), SurfaceComponent(1, 3, FlatTorus())])
    assert topological_index(two) == 20
    assert topological_index(sphere(0)) == 0


def test_defect_examples():
    assert defect(SPHERE_PROFILE, 0.5) == 0
    assert defect(TORUS_PROFILE, -0.3) == 1
    assert defect(TORUS_PROFILE, 0.3) == -1


def test_defect_at_root_is_an_error():
    with pytest.raises(RootError, match="r = 1"):
        defect(SPHERE_PROFILE, 1.0)


def test_defect_outside_resolved_range():
    with pytest.raises(CutoffError):
        defect(TORUS_PROFILE, 2.7)


def test_odd_zero_jump_rejected():
    with pytest.raises(ValueError, match="J\\(0\\)"):
        defect(DefectProfile(((0.0, 3),)), 0.5)


def test_asymmetric_profile_rejected():
    with pytest.raises(ValueError):
        DefectProfile(((1.0, 2), (-1.0, 3)))


@pytest.mark.parametrize("profile", PROFILES, ids=["sphere", "torus", "skew"])
@given(alpha=st.floats(min_value=-2.4, max_value=2.4))
def test_defect_antisymmetry(profile, alpha):
    assume(min(abs(abs(alpha) - abs(r)) for r in profile.roots) > 1e-6)
    assert defect(profile, -alpha) == -defect(profile, alpha)


@pytest.mark.parametrize("profile", PROFILES, ids=["sphere", "torus", "skew"])
def test_jump_relation(profile):
    eps = 1e-4
    for r, j in profile.jumps:
        if abs(r) + eps < profile.resolved_to:
            assert defect(profile, r - eps) - defect(profile, r + eps) == j


def test_index_jump_examples():
    assert index_jump(SPHERE_PROFILE, 0.5, 1.5) == 4
    assert index_jump(TORUS_PROFILE, -0.3, 0.3) == 2
    assert index_jump(TORUS_PROFILE, 0.2, 0.5) == 0
    with pytest.raises(RootError):
        index_jump(SPHERE_PROFILE, 1.0, 1.5)


def test_epsilon0():
    assert epsilon0(bspec(sphere())) == 1
    assert epsilon0(bspec(torus())) == pytest.approx(GOLDEN, abs=1e-12)
    assert epsilon0(bspec(sphere(scale=4.0))) == pytest.approx(min(1, -0.5 + math.sqrt(0.75)))
    with pytest.raises(CutoffError):
        epsilon0([])


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("alpha", [-0.5, 0.5])
def test_r3_benchmark(k, alpha):
    assert vdim(sphere(k), alpha).vdim == 4 * k


def test_torus_window():
    assert vdim(torus(), -0.3).vdim == 5
    assert vdim(torus(), 0.3).vdim == 3


def test_genus_two_window(data_dir):
    surf = BoundarySurface([SurfaceComponent(2, 1, MeshMetric(str(data_dir / "genus2.off")))])
    eps = epsilon0(bspec(surf))
    assert vdim(surf, -eps / 2).vdim == 6
    assert vdim(surf, eps / 2).vdim == 2


@given(alpha=st.floats(min_value=-2.3, max_value=2.3), k=st.integers(-3, 5))
def test_vdim_reflection(alpha, k):
    surf = torus(k)
    assume(min(abs(abs(alpha) - abs(r)) for r in TORUS_PROFILE.roots) > 1e-6)
    assert vdim(surf, alpha).vdim + vdim(surf, -alpha).vdim == 8 * k


@pytest.mark.parametrize("surface", [sphere(), torus(), sphere(scale=4.0), torus(scale=0.5),
                                     BoundarySurface([SurfaceComponent(0, 1, RoundSphere()),
                                                      SurfaceComponent(1, 2, FlatTorus())])])
def test_window_difference_is_b1(surface):
    eps = epsilon0(bspec(surface))
    gap = vdim(surface, -eps / 2).vdim - vdim(surface, eps / 2).vdim
    assert gap == betti(surface)[1]


def test_leading_asymptotics():
    assert leading_asymptotics(bspec(sphere()), 0.5) == (2, 3)
    assert leading_asymptotics(bspec(torus()), -0.3) == (1, 2)
    assert leading_asymptotics(bspec(sphere()), 1.5) == (3, 4)
    with pytest.raises(CutoffError):
        leading_asymptotics(bspec(sphere(), 2.5), 2.4)


def test_surjectivity_advisory():
    msg = surjectivity_advisory(0.5, True, sphere())
    assert msg.startswith("surjective (Prop 5.1)") and "(-1, 1)" in msg
    assert surjectivity_advisory(1.5, True).startswith("no surjectivity guarantee")
    assert "generic" in surjectivity_advisory(0.5, False)


def test_volume_scaling_advisory():
    assert volume_scaling_advisory(sphere()).factor == 1.0
    assert volume_scaling_advisory(torus()).factor == pytest.approx(0.5)
    radius_two = BoundarySurface([SurfaceComponent(0, 1, RoundSphere(2.0))])
    assert volume_scaling_advisory(radius_two).factor == pytest.approx(0.25)
    rescaled = torus(scale=volume_scaling_advisory(torus()).factor)
    assert epsilon0(bspec(rescaled)) == pytest.approx(1.0)


def test_report_json_keys_and_metadata():
    report = vdim(sphere(), 0.5, beta=0.7, k=3)
    keys = set(json.loads(report.to_json()))
    assert keys == {"alpha", "topological_index", "defect", "vdim", "epsilon0",
                    "u0_order", "u1_order", "advisories"}
    plain = vdim(sphere(), 0.5)
    assert report == plain
    assert report.vdim == plain.vdim
    assert "vdim" in report.table()


def test_report_invariant():
    with pytest.raises(ValueError):
        VdimReport(0.5, 4, 1, 4, 1.0, (2, 3))


def test_vdim_errors():
    with pytest.raises(RootError):
        vdim(sphere(), 1.0)
    with pytest.raises(CutoffError):
        vdim(sphere(), 3.0)


def test_profile_csv():
    rows = TORUS_PROFILE.to_csv().splitlines()
    assert rows[0] == "alpha_low,alpha_high,defect"
    assert "-0.61803398875,0,1" in rows
