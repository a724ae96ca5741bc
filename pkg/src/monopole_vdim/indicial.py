"""Indicial roots of the odd signature operator on a scattering end.

On the boundary, the Mellin-transformed model operator is
``I(r) = r + m/2 - N + (d + δ)`` acting on Λ*∂X, where N is k on odd
k-forms and m - k on even k-forms. The Hodge decomposition splits it into

* harmonic k-forms, where it is the scalar ``r + (-1)^(k+1) (m/2 - k)``;
* 2x2 blocks coupling a coexact j-form eigenform (eigenvalue ν) with its
  exterior derivative. For odd j the block is family A, for even j it is
  family B, both with ``k = j``.

For surfaces (m = 2) every coexact spectrum equals the nonzero function
spectrum, so the function spectrum alone determines bspec.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .boundary import BoundarySurface, MeshMetric, betti, component_spectrum
from .spectrum import SpectrumTable

ANALYTIC_MERGE_TOL = 1e-9
MESH_MERGE_TOL = 1e-6
DEFAULT_ROOT_CUTOFF = 2.5
RANK_RTOL = 1e-8


class CutoffError(ValueError):
    """The spectrum does not reach far enough to resolve the requested roots."""


@dataclass(frozen=True)
class Topological:
    degree: int
    multiplicity: int
    component: int | None = None

    def label(self) -> str:
        return f"top(k={self.degree},b={self.multiplicity})"


@dataclass(frozen=True)
class Geometric:
    family: str
    degree: int
    eigenvalue: float
    multiplicity: int
    component: int | None = None

    def label(self) -> str:
        return (f"geom{self.family}(k={self.degree},nu={self.eigenvalue:.12g},"
                f"mu={self.multiplicity})")


Origin = Union[Topological, Geometric]


@dataclass(frozen=True)
class IndicialRoot:
    value: float
    multiplicity: int
    contributions: tuple[Origin, ...] = field(default=())

    def __post_init__(self):
        if self.contributions:
            total = sum(c.multiplicity for c in self.contributions)
            if total != self.multiplicity:
                raise ValueError(f"multiplicity {self.multiplicity} != contributions {total}")

    @property
    def topological(self) -> bool:
        return any(isinstance(c, Topological) for c in self.contributions)


@dataclass(frozen=True)
class IndicialMatrix:
    r: float
    k: int
    nu: float
    family: str
    entries: tuple[tuple[float, float], tuple[float, float]]

    @property
    def determinant(self) -> float:
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


def _check_m(m: int):
    if m < 2 or m % 2:
        raise ValueError(f"boundary dimension m must be even and >= 2, got {m}")


def indicial_matrix(m: int, k: int, nu: float, family: str, r: float) -> IndicialMatrix:
    """The 2x2 block of I(r) on a coupled eigenpair."""
    _check_m(m)
    if not 0 <= k <= m - 1:
        raise ValueError(f"degree k must satisfy 0 <= k <= m-1, got k={k}")
    if not nu > 0:
        raise ValueError(f"eigenvalue must be positive, got nu={nu}")
    M = m / 2 - k
    s = math.sqrt(nu)
    if family == "A":
        entries = ((r + M, s), (s, r - M + 1))
    elif family == "B":
        entries = ((r - M, s), (s, r + M - 1))
    else:
        raise ValueError(f"family must be 'A' or 'B', got {family!r}")
    return IndicialMatrix(r, k, nu, family, entries)


def family_roots(m: int, k: int, nu: float, family: str) -> tuple[float, float]:
    """Both zeros of det I(r) for one block, in ascending order."""
    _check_m(m)
    root = math.sqrt((m / 2 - k - 0.5) ** 2 + nu)
    shift = -0.5 if family == "A" else 0.5
    if family not in ("A", "B"):
        raise ValueError(f"family must be 'A' or 'B', got {family!r}")
    return shift - root, shift + root


def coupling_family(j: int) -> str:
    """Family of the block pairing coexact j-forms with exact (j+1)-forms."""
    return "A" if j % 2 else "B"


def required_nu_cutoff(m: int, root_cutoff: float) -> float:
    """Smallest spectrum cutoff that produces every root with |r| <= root_cutoff."""
    _check_m(m)
    # min over k of (m/2 - k - 1/2)^2 is 1/4
    return (root_cutoff + 0.5) ** 2 - 0.25


def merge_roots(items: Sequence[tuple[float, Origin]], tol: float) -> list[IndicialRoot]:
    """Group contributions whose values agree within ``tol``."""
    ordered = sorted(items, key=lambda it: (it[0], _origin_key(it[1])))
    groups: list[list[tuple[float, Origin]]] = []
    for value, origin in ordered:
        if groups and abs(value - groups[-1][0][0]) <= tol:
            groups[-1].append((value, origin))
        else:
            groups.append([(value, origin)])
    roots = []
    for g in groups:
        exact = [v for v, o in g if isinstance(o, Topological)]
        value = exact[0] if exact else g[0][0]
        if abs(value) <= tol:
            value = 0.0
        origins = tuple(o for _, o in g)
        roots.append(IndicialRoot(value, sum(o.multiplicity for o in origins), origins))
    return roots


def _origin_key(o: Origin):
    if isinstance(o, Topological):
        return (0, o.degree, 0.0, "", o.component or 0)
    return (1, o.degree, o.eigenvalue, o.family, o.component or 0)


def _topological_items(m, betti_numbers, component=None):
    if len(betti_numbers) != m + 1:
        raise ValueError(f"need {m + 1} Betti numbers, got {len(betti_numbers)}")
    items = []
    for k, b in enumerate(betti_numbers):
        if b < 0:
            raise ValueError("Betti numbers must be nonnegative")
        if b:
            items.append(((-1) ** k * (m / 2 - k), Topological(k, int(b), component)))
    return items


def topological_roots(m: int, betti_numbers: Sequence[int]) -> list[IndicialRoot]:
    """Roots carried by harmonic forms: (-1)^k (m/2 - k) with multiplicity b^k."""
    _check_m(m)
    return merge_roots(_topological_items(m, betti_numbers), ANALYTIC_MERGE_TOL)


def _per_degree(m: int, spectrum) -> Mapping[int, SpectrumTable]:
    if isinstance(spectrum, SpectrumTable):
        if m != 2:
            raise ValueError("for m > 2 supply a mapping degree -> coexact spectrum")
        return {0: spectrum, 1: spectrum}
    missing = [j for j in range(m) if j not in spectrum]
    if missing:
        raise ValueError(f"missing coexact spectra for degrees {missing}")
    return spectrum


def _geometric_items(m, spectrum, root_cutoff, component=None):
    per_degree = _per_degree(m, spectrum)
    need = required_nu_cutoff(m, root_cutoff)
    items = []
    for j in range(m):
        table = per_degree[j]
        if table.cutoff < need - 1e-12:
            raise CutoffError(f"spectrum cutoff {table.cutoff:.6g} below {need:.6g} needed "
                              f"for roots up to |r| = {root_cutoff}")
        fam = coupling_family(j)
        for e in table.nonzero():
            for value in family_roots(m, j, e.eigenvalue, fam):
                if abs(value) <= root_cutoff + ANALYTIC_MERGE_TOL:
                    comp = e.component if component is None else component
                    items.append((value, Geometric(fam, j, e.eigenvalue, e.multiplicity, comp)))
    return items


def geometric_roots(m: int, spectrum, root_cutoff: float = DEFAULT_ROOT_CUTOFF,
                    tol: float = ANALYTIC_MERGE_TOL) -> list[IndicialRoot]:
    """Roots from the coupled eigen-blocks, |value| <= root_cutoff.

    ``spectrum`` is the function spectrum when m = 2, otherwise a mapping from
    each degree j in 0..m-1 to the coexact j-form spectrum.
    """
    _check_m(m)
    return merge_roots(_geometric_items(m, spectrum, root_cutoff), tol)


def _merge_tol(surface: BoundarySurface) -> float:
    if any(isinstance(c.metric, MeshMetric) for c in surface.components):
        return MESH_MERGE_TOL
    return ANALYTIC_MERGE_TOL


def bspec(surface: BoundarySurface, root_cutoff: float = DEFAULT_ROOT_CUTOFF) -> list[IndicialRoot]:
    """All indicial roots with |r| <= root_cutoff, merged over components."""
    m = 2
    need = required_nu_cutoff(m, root_cutoff)
    items = []
    for i, comp in enumerate(surface.components):
        b = (1, 2 * comp.genus, 1)
        items += _topological_items(m, b, i)
        items += _geometric_items(m, component_spectrum(comp, need), root_cutoff, i)
    items = [it for it in items if abs(it[0]) <= root_cutoff + ANALYTIC_MERGE_TOL]
    return merge_roots(items, _merge_tol(surface))


def multiplicity_at(roots: Sequence[IndicialRoot], r: float, tol: float = 1e-9) -> int:
    return sum(root.multiplicity for root in roots if abs(root.value - r) <= tol)


def _deficiency(block: np.ndarray) -> int:
    norm = np.linalg.norm(block, 2)
    if norm == 0:
        return block.shape[0]
    s = np.linalg.svd(block, compute_uv=False)
    return int(np.sum(s < RANK_RTOL * norm))


def nullspace_oracle(surface: BoundarySurface, r: float,
                     spectrum_cutoff: float | None = None) -> int:
    """dim ker I(r), from the assembled block-diagonal indicial operator.

    Independent of the root formulas: every block is built from the diagonal
    ``r + m/2 - N`` and the off-diagonal ``sqrt(ν)`` of d + δ, and the rank
    deficiency is measured numerically.
    """
    m = 2
    if spectrum_cutoff is None:
        spectrum_cutoff = required_nu_cutoff(m, abs(r) + 0.5)
    if spectrum_cutoff < required_nu_cutoff(m, abs(r)) - 1e-12:
        raise CutoffError(f"spectrum cutoff {spectrum_cutoff} cannot resolve r = {r}")

    def n_op(k):
        return k if k % 2 else m - k

    b0, b1, b2 = betti(surface)
    harmonic = np.concatenate([np.full(bk, r + m / 2 - n_op(k)) for k, bk in enumerate((b0, b1, b2))])
    deficiency = _deficiency(np.diag(harmonic)) if len(harmonic) else 0
    for comp in surface.components:
        table = component_spectrum(comp, spectrum_cutoff)
        if table.cutoff < spectrum_cutoff - 1e-12:
            raise CutoffError("component spectrum did not reach the requested cutoff")
        for e in table.nonzero():
            s = math.sqrt(e.eigenvalue)
            for j in range(m):
                pair = np.array([[r + m / 2 - n_op(j), s], [s, r + m / 2 - n_op(j + 1)]])
                deficiency += _deficiency(np.kron(pair, np.eye(e.multiplicity)))
    return deficiency


def roots_to_csv(roots: Sequence[IndicialRoot]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["value", "multiplicity", "origins"])
    for root in roots:
        writer.writerow([f"{root.value:.12g}", root.multiplicity,
                         ";".join(c.label() for c in root.contributions)])
    return buf.getvalue()


def number_line(roots: Sequence[IndicialRoot], cutoff: float, width: int = 61) -> str:
    """ASCII rendering: 'O' marks roots with a topological part, 'o' the rest."""
    if width < 11:
        raise ValueError("width too small")
    line = ["-"] * width

    def col(x):
        return int(round((x + cutoff) / (2 * cutoff) * (width - 1)))

    for root in roots:
        if abs(root.value) <= cutoff:
            c = col(root.value)
            line[c] = "O" if root.topological or line[c] == "O" else "o"
    axis = [" "] * width
    for tick in range(-int(math.floor(cutoff)), int(math.floor(cutoff)) + 1):
        c = col(tick)
        label = str(tick)
        start = max(0, min(width - len(label), c - len(label) // 2))
        axis[start:start + len(label)] = label
        if line[c] == "-":
            line[c] = "+"
    legend = "O topological (harmonic forms)   o geometric (Laplace eigenvalues)"
    return "\n".join(["".join(line), "".join(axis), legend])
