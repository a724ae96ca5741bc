"""Weighted index of the monopole deformation operator.

The virtual dimension at weight α is ``4 k̄ + defect(α)``. The defect index
is odd in α and piecewise constant, dropping by J(r) = dim F(r) across each
indicial root r. Those two facts alone fix it:

    defect(α) = -J(0)/2 - Σ_{0<r<α} J(r)   for α > 0,
    defect(-α) = -defect(α).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .boundary import BoundarySurface, betti, component_spectrum
from .indicial import DEFAULT_ROOT_CUTOFF, CutoffError, IndicialRoot, bspec

ROOT_TOL = 1e-9
NU_TARGET = 2.0


class RootError(ValueError):
    """A weight coincides with an indicial root."""


@dataclass(frozen=True)
class DefectProfile:
    """Indicial jumps (r, J(r)) resolved on [-resolved_to, resolved_to]."""

    jumps: tuple[tuple[float, int], ...]
    resolved_to: float = math.inf

    def __post_init__(self):
        jumps = tuple(sorted((float(r), int(j)) for r, j in self.jumps))
        object.__setattr__(self, "jumps", jumps)
        for r, j in jumps:
            if j <= 0:
                raise ValueError(f"jump at {r} must be positive, got {j}")
            mirror = [jj for rr, jj in jumps if abs(rr + r) <= ROOT_TOL]
            if mirror != [j]:
                raise ValueError(f"profile not symmetric: J({r}) = {j}, J({-r}) = {mirror}")

    @classmethod
    def from_roots(cls, roots: Sequence[IndicialRoot], resolved_to: float = math.inf) -> "DefectProfile":
        return cls(tuple((r.value, r.multiplicity) for r in roots if r.multiplicity > 0), resolved_to)

    def jump_at(self, r: float) -> int:
        return sum(j for rr, j in self.jumps if abs(rr - r) <= ROOT_TOL)

    @property
    def roots(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.jumps)

    def to_csv(self) -> str:
        """Step function: one row per interval between consecutive roots."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha_low", "alpha_high", "defect"])
        edges = [-self.resolved_to] + [r for r in self.roots if abs(r) < self.resolved_to] + [self.resolved_to]
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi - lo <= ROOT_TOL:
                continue
            mid = 0.5 * (lo + hi) if math.isfinite(lo) and math.isfinite(hi) else (hi - 1 if math.isfinite(hi) else lo + 1)
            writer.writerow([f"{lo:.12g}", f"{hi:.12g}", defect(self, mid)])
        return buf.getvalue()


def _check_weight(profile: DefectProfile, alpha: float):
    for r in profile.roots:
        if abs(alpha - r) <= ROOT_TOL:
            raise RootError(f"alpha = {alpha:.12g} is an indicial root (r = {r:.12g})")
    if abs(alpha) >= profile.resolved_to:
        raise CutoffError(f"|alpha| = {abs(alpha)} is outside the resolved range "
                          f"{profile.resolved_to}; raise the root cutoff")


def defect(profile: DefectProfile, alpha: float) -> int:
    _check_weight(profile, alpha)
    j0 = profile.jump_at(0.0)
    if j0 % 2:
        raise ValueError(f"J(0) = {j0} is odd, so J(0)/2 is not an integer; profile is corrupt")
    a = abs(alpha)
    value = -(j0 // 2) - sum(j for r, j in profile.jumps if ROOT_TOL < r < a)
    return value if alpha > 0 else -value


def index_jump(profile: DefectProfile, alpha1: float, alpha2: float) -> int:
    """defect(alpha1) - defect(alpha2), checked against Σ J(r) for r in between."""
    if not alpha1 < alpha2:
        raise ValueError("need alpha1 < alpha2")
    jump = defect(profile, alpha1) - defect(profile, alpha2)
    direct = sum(j for r, j in profile.jumps if alpha1 < r < alpha2)
    if jump != direct:
        raise AssertionError(f"jump {jump} disagrees with root sum {direct}")
    return jump


def topological_index(surface: BoundarySurface) -> int:
    return 4 * sum(surface.charges)


def epsilon0(roots: Sequence[IndicialRoot] | DefectProfile) -> float:
    values = roots.roots if isinstance(roots, DefectProfile) else [r.value for r in roots]
    nonzero = [abs(v) for v in values if abs(v) > ROOT_TOL]
    if not nonzero:
        raise CutoffError("no nonzero indicial root resolved; raise the root cutoff")
    return min(nonzero)


def leading_asymptotics(roots: Sequence[IndicialRoot] | DefectProfile, alpha: float) -> tuple[float, float]:
    """Decay orders (r+1, r+2) of u₀, u₁ for the smallest root r > alpha."""
    values = roots.roots if isinstance(roots, DefectProfile) else [r.value for r in roots]
    above = [v for v in values if v > alpha + ROOT_TOL]
    if not above:
        raise CutoffError(f"no indicial root above alpha = {alpha} is resolved")
    r = min(above)
    return r + 1, r + 2


def smallest_nonzero_eigenvalue(surface: BoundarySurface) -> float:
    best = math.inf
    for comp in surface.components:
        cutoff = 4.0
        while True:
            table = component_spectrum(comp, cutoff)
            nz = table.nonzero()
            if nz:
                best = min(best, nz[0].eigenvalue)
                break
            if cutoff > 1e8:
                raise CutoffError("no nonzero eigenvalue found")
            cutoff *= 4
    return best


def surjectivity_advisory(alpha: float, ricci_nonnegative: bool,
                          surface: BoundarySurface | None = None) -> str:
    floor = "framed monopoles need alpha >= -1"
    if ricci_nonnegative and alpha <= 1:
        msg = f"surjective (Prop 5.1): alpha = {alpha:.6g} <= 1 with nonnegative Ricci curvature; {floor}"
        if surface is not None:
            nu = smallest_nonzero_eigenvalue(surface)
            if nu >= NU_TARGET - 1e-9:
                msg += "; unobstructed window (-1, 1)"
        return msg
    if not ricci_nonnegative:
        return ("no surjectivity guarantee: Ricci sign not asserted; surjectivity holds "
                f"for a generic set of metrics; {floor}")
    return f"no surjectivity guarantee: alpha = {alpha:.6g} > 1; {floor}"


@dataclass(frozen=True)
class ScalingAdvice:
    nu_min: float
    factor: float
    message: str


def volume_scaling_advisory(surface: BoundarySurface) -> ScalingAdvice:
    """Area scale factor c that lifts the smallest nonzero eigenvalue to 2."""
    nu = smallest_nonzero_eigenvalue(surface)
    if nu >= NU_TARGET - 1e-9:
        return ScalingAdvice(nu, 1.0, f"smallest nonzero eigenvalue {nu:.6g} >= 2; no rescaling needed")
    factor = nu / NU_TARGET
    return ScalingAdvice(nu, factor, f"smallest nonzero eigenvalue {nu:.6g} < 2; scale the boundary "
                                     f"area by {factor:.6g} to clear geometric roots from (-1, 1)")


@dataclass(frozen=True)
class VdimReport:
    alpha: float
    topological_index: int
    defect: int
    vdim: int
    epsilon0: float
    leading_orders: tuple[float, float]
    advisories: tuple[str, ...] = ()
    beta: float | None = field(default=None, compare=False)
    k: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vdim != self.topological_index + self.defect:
            raise ValueError("vdim must equal topological index plus defect")

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "topological_index": self.topological_index,
            "defect": self.defect,
            "vdim": self.vdim,
            "epsilon0": self.epsilon0,
            "u0_order": self.leading_orders[0],
            "u1_order": self.leading_orders[1],
            "advisories": list(self.advisories),
        }

    def to_json(self) -> str:
        return json.dumps(_round_floats(self.as_dict()), sort_keys=True, indent=2)

    def table(self) -> str:
        rows = [
            ("alpha", f"{self.alpha:.12g}"),
            ("topological index", str(self.topological_index)),
            ("defect", str(self.defect)),
            ("vdim", str(self.vdim)),
            ("epsilon0", f"{self.epsilon0:.12g}"),
            ("u0 order", f"{self.leading_orders[0]:.12g}"),
            ("u1 order", f"{self.leading_orders[1]:.12g}"),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k:<{width}}  {v}" for k, v in rows]
        lines += [f"note: {a}" for a in self.advisories]
        return "\n".join(lines)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def vdim(surface: BoundarySurface, alpha: float, root_cutoff: float = DEFAULT_ROOT_CUTOFF,
         ricci_nonnegative: bool = False, beta: float | None = None, k: int | None = None
         ) -> VdimReport:
    """Virtual dimension of the framed moduli space at weight ``alpha``.

    ``beta`` and ``k`` (the Sobolev weight and order of the Fredholm setting)
    are recorded on the report but never enter the computation.
    """
    if abs(alpha) > root_cutoff:
        raise CutoffError(f"|alpha| = {abs(alpha)} exceeds root cutoff {root_cutoff}")
    roots = bspec(surface, root_cutoff)
    profile = DefectProfile.from_roots(roots, resolved_to=root_cutoff + ROOT_TOL)
    d = defect(profile, alpha)
    top = topological_index(surface)
    orders = leading_asymptotics(profile, alpha)
    advisories = [surjectivity_advisory(alpha, ricci_nonnegative, surface), volume_scaling_advisory(surface).message]
    if beta is not None and abs(beta - alpha) >= 0.5:
        advisories.append(f"beta = {beta:.6g} outside the Fredholm window |beta - alpha| < 1/2")
    return VdimReport(alpha, top, d, top + d, epsilon0(profile), orders, tuple(advisories), beta, k)


__all__ = [
    "DefectProfile", "RootError", "ScalingAdvice", "VdimReport", "defect", "epsilon0",
    "index_jump", "leading_asymptotics", "smallest_nonzero_eigenvalue", "surjectivity_advisory",
    "topological_index", "vdim", "volume_scaling_advisory", "betti",
]
