"""Finite-difference laboratory for the monopole deformation complex on R^3.

Conventions
-----------
su(2) is identified with R^3 through the basis ``T_a = -(i/2) σ_a``, so the
bracket is the cross product and the inner product is the Euclidean one on
components. Covariant derivatives are ``D_i u = ∂_i u + A_i × u``; 2-forms
are stored as vectors through the Hodge star, so the Bogomolny equation
reads ``B = DΦ`` with ``B_k = ½ ε_kij F_ij``.

All derivatives are centered second-order differences. Values that would
need a point outside the cube are NaN, so every derivative shrinks the
valid region by one layer and residual maxima only see interior sites.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .clifford import (
    I_UNIT,
    FormEndomorphism,
    basis_blades,
    blade,
    covector,
    exact_rank,
    interior,
    wedge,
)

EPS = np.zeros((3, 3, 3))
EPS[0, 1, 2] = EPS[1, 2, 0] = EPS[2, 0, 1] = 1.0
EPS[0, 2, 1] = EPS[2, 1, 0] = EPS[1, 0, 2] = -1.0


class GridError(ValueError):
    """Grid too coarse, or fields sampled on different grids."""


def bracket(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """[u, v] for su(2)-valued arrays; the Lie algebra index precedes the 3 grid axes."""
    return np.cross(u, v, axisa=-4, axisb=-4, axisc=-4)


@dataclass(frozen=True, eq=False)
class FieldConfig:
    """Gauge field ``A[i, a, x, y, z]`` and Higgs field ``Phi[a, x, y, z]`` on a cube."""

    R: float
    n: int
    A: np.ndarray
    Phi: np.ndarray

    @property
    def h(self) -> float:
        return 2 * self.R / (self.n - 1)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.R, self.R, self.n)

    def coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.axis, self.axis, self.axis, indexing="ij"))

    def check_field(self, u: np.ndarray, name: str = "field"):
        if u.shape[-3:] != (self.n,) * 3:
            raise GridError(f"{name} sampled on a {u.shape[-3:]} grid, config has {self.n}^3")


def _require_grid(n: int):
    if n < 5:
        raise GridError(f"grid too coarse: need at least 3 interior points per axis, got n={n}")


def _phi_profile(r: np.ndarray) -> np.ndarray:
    """(coth r - 1/r) / r, regular at r = 0."""
    out = np.empty_like(r)
    small = r < 0.05
    rs = r[small]
    out[small] = 1 / 3 - rs**2 / 45 + 2 * rs**4 / 945
    rl = r[~small]
    out[~small] = (1 / np.tanh(rl) - 1 / rl) / rl
    return out


def _gauge_profile(r: np.ndarray) -> np.ndarray:
    """(1 - r / sinh r) / r^2, regular at r = 0."""
    out = np.empty_like(r)
    small = r < 0.05
    rs = r[small]
    out[small] = 1 / 6 - 7 * rs**2 / 360 + 31 * rs**4 / 15120
    rl = r[~small]
    out[~small] = (1 - rl / np.sinh(rl)) / rl**2
    return out


def bps_monopole(R: float = 8.0, n_points: int = 33) -> FieldConfig:
    """Charge-one Prasad-Sommerfield monopole sampled on [-R, R]^3.

    ``Φ^a = -x^a (coth r - 1/r)/r`` and ``A_i^a = ε_aij x^j (1 - r/sinh r)/r^2``.
    The minus sign on Φ is the one compatible with ``F = ⋆DΦ`` for this
    bracket and orientation.
    """
    if not R > 1:
        raise ValueError(f"R must exceed 1, got {R}")
    if n_points < 17:
        raise GridError(f"n_points must be >= 17, got {n_points}")
    axis = np.linspace(-R, R, n_points)
    x = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"))
    r = np.sqrt((x**2).sum(0))
    f = _phi_profile(r)
    g = _gauge_profile(r)
    Phi = -x * f
    A = np.einsum("aij,j...->ia...", EPS, x) * g
    return FieldConfig(float(R), n_points, A, Phi)


def trivial_config(R: float, n_points: int, phi=(0.0, 0.0, 0.0)) -> FieldConfig:
    """A = 0 and constant Φ."""
    shape = (n_points,) * 3
    Phi = np.broadcast_to(np.asarray(phi, float)[:, None, None, None], (3,) + shape).copy()
    return FieldConfig(float(R), n_points, np.zeros((3, 3) + shape), Phi)


# ---------------------------------------------------------------- stencils

def _shift(u: np.ndarray, s: int, k: int) -> np.ndarray:
    """u evaluated at index offset k along spatial axis s; NaN outside."""
    ax = u.ndim - 3 + s
    out = np.full_like(u, np.nan)
    n = u.shape[ax]
    src = [slice(None)] * u.ndim
    dst = [slice(None)] * u.ndim
    if k >= 0:
        src[ax], dst[ax] = slice(k, n), slice(0, n - k)
    else:
        src[ax], dst[ax] = slice(0, n + k), slice(-k, n)
    out[tuple(dst)] = u[tuple(src)]
    return out


def partial(u: np.ndarray, s: int, h: float) -> np.ndarray:
    return (_shift(u, s, 1) - _shift(u, s, -1)) / (2 * h)


def second_partial(u: np.ndarray, s: int, h: float) -> np.ndarray:
    return (_shift(u, s, 1) - 2 * u + _shift(u, s, -1)) / h**2


def covariant(cfg: FieldConfig, u: np.ndarray, s: int) -> np.ndarray:
    return partial(u, s, cfg.h) + bracket(cfg.A[s], u)


def gradient_A(cfg: FieldConfig, u: np.ndarray) -> np.ndarray:
    return np.stack([covariant(cfg, u, s) for s in range(3)])


def curl_A(cfg: FieldConfig, v: np.ndarray) -> np.ndarray:
    """(curl_A v)_k = ε_kij D_i v_j for an ad-valued 1-form v[i, a, ...]."""
    out = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        out.append(covariant(cfg, v[j], i) - covariant(cfg, v[i], j))
    return np.stack(out)


def div_A(cfg: FieldConfig, v: np.ndarray) -> np.ndarray:
    return sum(covariant(cfg, v[s], s) for s in range(3))


def magnetic_field(cfg: FieldConfig) -> np.ndarray:
    """B_k = ½ ε_kij F_ij with F_ij = ∂_i A_j - ∂_j A_i + A_i × A_j."""
    h, A = cfg.h, cfg.A
    out = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        out.append(partial(A[j], i, h) - partial(A[i], j, h) + bracket(A[i], A[j]))
    return np.stack(out)


def bogomolny_map(cfg: FieldConfig) -> np.ndarray:
    """⋆F_A - d_AΦ as a vector of ad-valued components."""
    return magnetic_field(cfg) - gradient_A(cfg, cfg.Phi)


def _max_norm(v: np.ndarray, lead: int) -> float:
    """Max over sites of the Euclidean norm over the first ``lead`` axes."""
    flat = v.reshape((-1,) + v.shape[lead:])
    norms = np.sqrt((flat**2).sum(0))
    finite = norms[np.isfinite(norms)]
    if finite.size == 0:
        raise GridError("no interior sites left after differencing; grid too coarse")
    return float(finite.max())


def bogomolny_residual(cfg: FieldConfig) -> float:
    _require_grid(cfg.n)
    return _max_norm(bogomolny_map(cfg), 2)


# ---------------------------------------------------------------- complex

@dataclass(frozen=True, eq=False)
class OddFormField:
    """ad-valued 1-form ``a[i, a, ...]`` plus the 3-form ``phi dvol`` (stored as ``phi[a, ...]``)."""

    a: np.ndarray
    phi: np.ndarray


@dataclass(frozen=True, eq=False)
class EvenFormField:
    """ad-valued 0-form ``gamma[a, ...]`` plus the 2-form stored as ``b[k, a, ...]`` via ⋆."""

    gamma: np.ndarray
    b: np.ndarray


def apply_D1(cfg: FieldConfig, gamma: np.ndarray) -> OddFormField:
    """γ ↦ (-d_Aγ, -⋆[Φ, γ])."""
    cfg.check_field(gamma, "gamma")
    return OddFormField(-gradient_A(cfg, gamma), -bracket(cfg.Phi, gamma))


def apply_D1_adjoint(cfg: FieldConfig, field: OddFormField) -> np.ndarray:
    """Coulomb functional Σ D_i a_i + [Φ, φ]."""
    return div_A(cfg, field.a) + bracket(cfg.Phi, field.phi)


def apply_D2(cfg: FieldConfig, field: OddFormField) -> EvenFormField:
    """(a, φ) ↦ (D₁*(a, φ), d_A a + ⋆[Φ, a] + δ_A φ).

    The 2-form part is stored through ⋆ as ``curl_A a + [Φ, a] - D φ``; the
    0-form slot holds the Coulomb gauge functional.
    """
    cfg.check_field(field.phi, "phi")
    cfg.check_field(field.a, "a")
    b = curl_A(cfg, field.a) + bracket(cfg.Phi[None], field.a) - gradient_A(cfg, field.phi)
    return EvenFormField(apply_D1_adjoint(cfg, field), b)


def apply_D2_adjoint(cfg: FieldConfig, b: np.ndarray) -> OddFormField:
    """Formal adjoint of the 2-form part of D₂."""
    return OddFormField(curl_A(cfg, b) - bracket(cfg.Phi[None], b), div_A(cfg, b))


def linearized_bogomolny(cfg: FieldConfig, a: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Derivative of the Bogomolny map in direction (a, ψ), by exact polarization.

    The discrete map is quadratic in (A, Φ), so the symmetric difference with
    unit step is its derivative up to rounding.
    """
    plus = FieldConfig(cfg.R, cfg.n, cfg.A + a, cfg.Phi + psi)
    minus = FieldConfig(cfg.R, cfg.n, cfg.A - a, cfg.Phi - psi)
    return 0.5 * (bogomolny_map(plus) - bogomolny_map(minus))


def chain_residual(cfg: FieldConfig, gamma: np.ndarray) -> float:
    """‖D₂ D₁ γ‖∞ over interior sites (2-form part)."""
    return _max_norm(apply_D2(cfg, apply_D1(cfg, gamma)).b, 2)


def gauge_consistency(cfg: FieldConfig, gamma: np.ndarray) -> float:
    """Relative gap between D₂D₁γ and the linearized Bogomolny map on D₁γ."""
    d1 = apply_D1(cfg, gamma)
    direct = apply_D2(cfg, d1).b
    via_map = linearized_bogomolny(cfg, d1.a, d1.phi)
    mask = np.isfinite(direct) & np.isfinite(via_map)
    scale = max(float(np.abs(direct[mask]).max()), 1e-300)
    return float(np.abs(direct[mask] - via_map[mask]).max()) / scale


def connection_laplacian(cfg: FieldConfig, u: np.ndarray) -> np.ndarray:
    """∇*∇u = -Σ_i D_i D_i u with compact three-point second differences."""
    h, A = cfg.h, cfg.A
    total = 0.0
    for s in range(3):
        total = total + (second_partial(u, s, h) + 2 * bracket(A[s], partial(u, s, h))
                         + bracket(partial(A[s], s, h), u) + bracket(A[s], bracket(A[s], u)))
    return -total


def potential_term(cfg: FieldConfig, u: np.ndarray) -> np.ndarray:
    """-[Φ, [Φ, u]], a nonnegative operator."""
    return -bracket(cfg.Phi, bracket(cfg.Phi, u))


def weitzenbock_check(cfg: FieldConfig, gamma: np.ndarray, two_form: np.ndarray | None = None
                      ) -> tuple[float, float]:
    """Residuals of D₁*D₁ = ∇*∇ - [Φ,[Φ,·]] on Λ⁰ and D₂D₂* = ∇*∇ - [Φ,[Φ,·]] on Λ².

    The curvature term vanishes on the flat grid. Left sides use nested
    centered differences, right sides the compact connection Laplacian.
    """
    _require_grid(cfg.n)
    cfg.check_field(gamma, "gamma")
    lhs0 = apply_D1_adjoint(cfg, apply_D1(cfg, gamma))
    rhs0 = connection_laplacian(cfg, gamma) + potential_term(cfg, gamma)
    res0 = _max_norm(lhs0 - rhs0, 1)
    if two_form is None:
        return res0, float("nan")
    cfg.check_field(two_form, "two_form")
    lhs2 = apply_D2(cfg, apply_D2_adjoint(cfg, two_form)).b
    rhs2 = np.stack([connection_laplacian(cfg, two_form[k]) + potential_term(cfg, two_form[k])
                     for k in range(3)])
    return res0, _max_norm(lhs2 - rhs2, 2)


def inner(u: np.ndarray, v: np.ndarray, h: float) -> float:
    """Discrete L² pairing over sites where both are defined."""
    prod = u * v
    return float(np.nansum(prod) * h**3)


def adjointness_defect(cfg: FieldConfig, gamma: np.ndarray, w: OddFormField) -> float:
    """|⟨D₁γ, w⟩ - ⟨γ, D₁*w⟩| relative to the pairing size, for compact samples."""
    d1 = apply_D1(cfg, gamma)
    lhs = inner(np.nan_to_num(d1.a), w.a, cfg.h) + inner(np.nan_to_num(d1.phi), w.phi, cfg.h)
    rhs = inner(gamma, np.nan_to_num(apply_D1_adjoint(cfg, w)), cfg.h)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def potential_positivity(cfg: FieldConfig, gamma: np.ndarray) -> float:
    """⟨-[Φ,[Φ,γ]], γ⟩ summed over the grid (must be >= 0)."""
    return inner(potential_term(cfg, gamma), gamma, cfg.h)


def bump(cfg: FieldConfig, rho: float = 4.0, direction=(1.0, -0.5, 0.25),
         center=(0.3, -0.2, 0.1)) -> np.ndarray:
    """Compactly supported (1 - |x-c|²/ρ²)^6 times a fixed Lie algebra vector."""
    x, y, z = cfg.coords()
    s = ((x - center[0]) ** 2 + (y - center[1]) ** 2 + (z - center[2]) ** 2) / rho**2
    prof = np.where(s < 1, (1 - s) ** 6, 0.0)
    return np.asarray(direction, float)[:, None, None, None] * prof


def bump_two_form(cfg: FieldConfig, rho: float = 4.0) -> np.ndarray:
    x, y, z = cfg.coords()
    s = (x**2 + y**2 + z**2) / rho**2
    prof = np.where(s < 1, (1 - s) ** 6, 0.0)
    coeff = np.array([[1.0, 0.2, -0.4], [0.0, -0.7, 0.5], [0.3, 0.3, 1.0]])
    mod = np.stack([1 + 0.1 * x, 1 - 0.1 * y, 1 + 0.05 * z])
    return np.einsum("ka,k...->ka...", coeff, mod * prof)


# ---------------------------------------------------------------- symbols

def symbol_matrices(xi: Sequence) -> tuple[FormEndomorphism, FormEndomorphism]:
    """σ(D₁)(ξ) = -iξ∧ on Λ⁰ and σ(D₂)(ξ) = iξ∧ - iξ⌟ on Λ¹ ⊕ Λ³, exactly."""
    xi = [Fraction(c) for c in xi]
    if len(xi) != 3:
        raise ValueError("covector must have 3 components")
    if not any(xi):
        raise ValueError("symbol requires a nonzero covector")
    v = covector(xi)
    minus_i = I_UNIT * -1
    s1 = FormEndomorphism.from_map(3, lambda x: wedge(v, x).scale(minus_i), (0,), (1, 3))
    s2 = FormEndomorphism.from_map(
        3, lambda x: (wedge(v, x.grade_part(1)) - interior(v, x.grade_part(3))).scale(I_UNIT),
        (1, 3), (2,))
    return s1, s2


@dataclass(frozen=True)
class SymbolReport:
    xi: tuple[str, ...]
    composite_zero: bool
    rank_sigma1: int
    rank_sigma2: int
    interior_injective_on_top: bool
    middle_exact: bool

    @property
    def passed(self) -> bool:
        return (self.composite_zero and self.rank_sigma1 == 1 and self.rank_sigma2 == 3
                and self.interior_injective_on_top and self.middle_exact)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["xi"] = list(self.xi)
        d["passed"] = self.passed
        return d


def symbol_exactness(xi: Sequence) -> SymbolReport:
    """Exact check that 0 → Λ⁰ → Λ¹⊕Λ³ → Λ² is exact at the middle slot.

    Ranks are per su(2) direction; the Lie algebra factor is a tensor factor.
    """
    s1, s2 = symbol_matrices(xi)
    composite = s2 @ s1
    zero = all(c == 0 for row in composite.matrix for c in row)
    r1, r2 = exact_rank(s1.matrix), exact_rank(s2.matrix)
    v = covector([Fraction(c) for c in xi])
    top = blade((0, 1, 2), 3)
    injective = interior(v, top) != type(top)(3)
    middle_dim = len(basis_blades(3, (1, 3)))
    exact = (middle_dim - r2) == r1
    return SymbolReport(tuple(str(Fraction(c)) for c in xi), zero, r1, r2, injective, exact)


# ---------------------------------------------------------------- charge

def _boundary_triangles(n: int) -> list[tuple[tuple[int, int, int], ...]]:
    """Outward-oriented triangles on the surface of the index cube [0, n-1]^3."""
    tris = []
    last = n - 1
    for axis in range(3):
        u, w = (axis + 1) % 3, (axis + 2) % 3
        for side, sign in ((last, 1), (0, -1)):
            for i in range(last):
                for j in range(last):
                    def p(a, b):
                        q = [0, 0, 0]
                        q[axis], q[u], q[w] = side, a, b
                        return tuple(q)
                    a, b, c, d = p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1)
                    # (e_u, e_w, e_axis) is right handed, so this loop is outward for sign=+1
                    if sign > 0:
                        tris += [(a, b, c), (a, c, d)]
                    else:
                        tris += [(a, c, b), (a, d, c)]
    return tris


def _unit_higgs(cfg: FieldConfig, p) -> np.ndarray:
    v = cfg.Phi[(slice(None),) + tuple(p)]
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("Higgs field vanishes on the boundary")
    return v / norm


def _positive_eigenline(phi_hat: np.ndarray) -> np.ndarray:
    """Unit vector spanning the +i eigenspace of Φ^a T_a with T_a = -(i/2)σ_a.

    That eigenspace is the -1 eigenspace of Φ̂·σ.
    """
    x, y, z = phi_hat
    m = np.array([[z, x - 1j * y], [x + 1j * y, -z]])
    w, vecs = np.linalg.eigh(m)
    v = vecs[:, 0]
    return v / np.linalg.norm(v)


def higgs_degree(cfg: FieldConfig) -> float:
    """Degree of Φ/|Φ| on the cube surface, as a sum of signed solid angles / 4π."""
    total = 0.0
    for tri in _boundary_triangles(cfg.n):
        a, b, c = (_unit_higgs(cfg, p) for p in tri)
        num = float(np.dot(a, np.cross(b, c)))
        den = 1 + float(np.dot(a, b) + np.dot(b, c) + np.dot(c, a))
        total += 2 * math.atan2(num, den)
    return total / (4 * math.pi)


def chern_number(cfg: FieldConfig) -> float:
    """c₁ of the +i eigenline of Φ on the cube surface (lattice link method)."""
    lines = {}
    total = 0.0
    for tri in _boundary_triangles(cfg.n):
        vs = []
        for p in tri:
            if p not in lines:
                lines[p] = _positive_eigenline(_unit_higgs(cfg, p))
            vs.append(lines[p])
        u = np.vdot(vs[0], vs[1]) * np.vdot(vs[1], vs[2]) * np.vdot(vs[2], vs[0])
        total += np.angle(u)
    return -total / (2 * math.pi)


def magnetic_charge(cfg: FieldConfig) -> float:
    """(1/4π) times the flux of ⟨Φ̂, B⟩ through the cube one layer inside the faces."""
    B = magnetic_field(cfg)
    norm = np.sqrt((cfg.Phi**2).sum(0))
    phat = cfg.Phi / np.where(norm > 0, norm, 1.0)
    radial = np.einsum("ka...,a...->k...", B, phat)
    lo, hi = 1, cfg.n - 2
    h = cfg.h
    flux = 0.0
    weights = np.ones(hi - lo + 1)
    weights[0] = weights[-1] = 0.5
    w2 = np.outer(weights, weights) * h**2
    for axis in range(3):
        for idx, sign in ((hi, 1.0), (lo, -1.0)):
            sl = [slice(lo, hi + 1)] * 3
            sl[axis] = idx
            flux += sign * float((radial[axis][tuple(sl)] * w2).sum())
    return flux / (4 * math.pi)


# ---------------------------------------------------------------- reports

def write_vtk(cfg: FieldConfig, path) -> None:
    """ASCII structured-points file with the scalar |Φ|."""
    mag = np.sqrt((cfg.Phi**2).sum(0))
    lines = [
        "# vtk DataFile Version 3.0",
        "Higgs field magnitude",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {cfg.n} {cfg.n} {cfg.n}",
        f"ORIGIN {-cfg.R:.12g} {-cfg.R:.12g} {-cfg.R:.12g}",
        f"SPACING {cfg.h:.12g} {cfg.h:.12g} {cfg.h:.12g}",
        f"POINT_DATA {cfg.n ** 3}",
        "SCALARS phi_norm double 1",
        "LOOKUP_TABLE default",
    ]
    # VTK expects x fastest
    values = mag.transpose(2, 1, 0).ravel()
    lines += [f"{v:.12g}" for v in values]
    Path(path).write_text("\n".join(lines) + "\n")


def grid_sequence(n_max: int, levels: int) -> list[int]:
    """Nested grids ending at ``n_max`` points, each halving the spacing."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if (n_max - 1) % (2 ** (levels - 1)):
        raise GridError(f"n={n_max} cannot be coarsened {levels - 1} times")
    pts = [(n_max - 1) // 2**i + 1 for i in reversed(range(levels))]
    if pts[0] < 17:
        raise GridError(f"coarsest grid would have {pts[0]} < 17 points")
    return pts


def _round(x):
    if isinstance(x, float):
        return float(f"{x:.12g}") if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def verify_bps(R: float = 8.0, n_max: int = 65, levels: int = 2, rho: float = 4.0,
               with_charge: bool = True) -> dict:
    """Run every lab check on nested grids and report convergence ratios."""
    grids = grid_sequence(n_max, levels)
    rows = []
    for n in grids:
        cfg = bps_monopole(R, n)
        gamma = bump(cfg, rho)
        res0, res2 = weitzenbock_check(cfg, gamma, bump_two_form(cfg, rho))
        w = apply_D1(cfg, bump(cfg, rho * 0.8, direction=(0.2, 1.0, -0.3), center=(-0.4, 0.1, 0.2)))
        w = OddFormField(np.nan_to_num(w.a), np.nan_to_num(w.phi))
        rows.append({
            "n": n,
            "h": cfg.h,
            "bogomolny_residual": bogomolny_residual(cfg),
            "chain_residual": chain_residual(cfg, gamma),
            "weitzenbock_residual0": res0,
            "weitzenbock_residual2": res2,
            "coulomb_selfcheck": adjointness_defect(cfg, gamma, w),
            "gauge_consistency": gauge_consistency(cfg, gamma),
            "potential_positivity": potential_positivity(cfg, gamma),
        })
    keys = ["bogomolny_residual", "chain_residual", "weitzenbock_residual0", "weitzenbock_residual2"]
    rates = {k: [rows[i][k] / rows[i + 1][k] for i in range(len(rows) - 1)] for k in keys}
    finest = rows[-1]
    report = {
        "grid": [r["n"] for r in rows],
        "h": [r["h"] for r in rows],
        "R": R,
        "bogomolny_residual": [r["bogomolny_residual"] for r in rows],
        "chain_residual": [r["chain_residual"] for r in rows],
        "weitzenbock_residual0": [r["weitzenbock_residual0"] for r in rows],
        "weitzenbock_residual2": [r["weitzenbock_residual2"] for r in rows],
        "coulomb_selfcheck": finest["coulomb_selfcheck"],
        "gauge_consistency": max(r["gauge_consistency"] for r in rows),
        "potential_positivity": min(r["potential_positivity"] for r in rows),
        "convergence_rates": rates,
        "symbol_exactness": symbol_exactness((1, 0, 0)).passed and symbol_exactness((2, -3, 5)).passed,
    }
    if with_charge:
        coarse = bps_monopole(R, grids[0])
        report["higgs_degree"] = higgs_degree(coarse)
        report["chern_number"] = chern_number(coarse)
        report["magnetic_charge"] = magnetic_charge(coarse)
    return _round(report)


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
