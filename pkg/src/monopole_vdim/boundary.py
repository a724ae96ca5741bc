"""Boundary surfaces: components, Betti numbers and Laplace spectra.

Analytic spectra are provided for round spheres and flat tori; triangle
meshes go through the cotangent Laplacian in :mod:`monopole_vdim.mesh`.
Only function spectra are needed: on a closed oriented surface the nonzero
spectra on coexact 1-forms and on 2-forms coincide with the nonzero function
spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .mesh import Mesh, MeshError, dec_function_spectrum, load_mesh
from .spectrum import ANALYTIC_GAP, SpectrumEntry, SpectrumTable, cluster_eigenvalues, merge_tables


@dataclass(frozen=True)
class RoundSphere:
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class FlatTorus:
    """Flat torus R^2 / L Z^2; the columns of ``lattice`` generate L."""

    lattice: tuple[tuple[float, float], tuple[float, float]] = ((2 * math.pi, 0.0), (0.0, 2 * math.pi))

    def __post_init__(self):
        arr = np.asarray(self.lattice, dtype=float)
        if arr.shape != (2, 2):
            raise ValueError("torus lattice must be a 2x2 matrix")
        object.__setattr__(self, "lattice", tuple(tuple(float(x) for x in row) for row in arr))
        if abs(np.linalg.det(arr)) < 1e-12 * max(1.0, float(np.abs(arr).max()) ** 2):
            raise ValueError("singular torus lattice")


@dataclass(frozen=True)
class MeshMetric:
    path: str


Metric = Union[RoundSphere, FlatTorus, MeshMetric]


@dataclass(frozen=True)
class SurfaceComponent:
    genus: int
    charge: int = 0
    metric: Metric = field(default_factory=RoundSphere)
    area_scale: float = 1.0

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"genus must be nonnegative, got {self.genus}")
        if not self.area_scale > 0:
            raise ValueError(f"area_scale must be positive, got {self.area_scale}")
        if isinstance(self.metric, RoundSphere) and self.genus != 0:
            raise ValueError("a round sphere component must have genus 0")
        if isinstance(self.metric, FlatTorus) and self.genus != 1:
            raise ValueError("a flat torus component must have genus 1")


@dataclass(frozen=True)
class BoundarySurface:
    components: tuple[SurfaceComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("boundary surface needs at least one component")

    @property
    def charges(self) -> tuple[int, ...]:
        return tuple(c.charge for c in self.components)


def betti(surface: BoundarySurface) -> tuple[int, int, int]:
    b0 = len(surface.components)
    b1 = sum(2 * c.genus for c in surface.components)
    return b0, b1, b0


def sphere_spectrum(radius: float = 1.0, cutoff: float = 20.0) -> SpectrumTable:
    """l(l+1)/r^2 with multiplicity 2l+1, for all values up to ``cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    if not radius > 0:
        raise ValueError("radius must be positive")
    entries = []
    l = 0
    while True:
        value = l * (l + 1) / radius**2
        if value > cutoff:
            break
        entries.append(SpectrumEntry(value, 2 * l + 1))
        l += 1
    return SpectrumTable(tuple(entries), float(cutoff))


def torus_spectrum(lattice, cutoff: float = 20.0) -> SpectrumTable:
    """4π²|μ*|² over the dual lattice, multiplicities aggregated."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    L = np.asarray(FlatTorus(lattice).lattice, dtype=float)
    dual = np.linalg.inv(L).T
    bound = int(math.ceil(np.linalg.norm(L, 2) * math.sqrt(cutoff) / (2 * math.pi))) + 1
    rng = np.arange(-bound, bound + 1)
    p, q = np.meshgrid(rng, rng, indexing="ij")
    ints = np.stack([p.ravel(), q.ravel()])
    vecs = dual @ ints
    values = 4 * math.pi**2 * (vecs**2).sum(0)
    values = values[values <= cutoff * (1 + 1e-12)]
    clusters = cluster_eigenvalues(values, ANALYTIC_GAP, zero_tol=0.0)
    return SpectrumTable(tuple(SpectrumEntry(v, m) for v, m in clusters), float(cutoff))


@lru_cache(maxsize=16)
def _cached_mesh(path: str) -> Mesh:
    return load_mesh(path)


def mesh_spectrum(mesh: Mesh, cutoff: float, initial_count: int = 16) -> SpectrumTable:
    """Mesh eigenvalues, computing more until every value <= cutoff is resolved."""
    n = len(mesh.vertices)
    count = min(initial_count, n)
    while True:
        table = dec_function_spectrum(mesh, count)
        if table.cutoff >= cutoff or count >= n:
            break
        count = min(2 * count, n)
    kept = tuple(e for e in table.entries if e.eigenvalue <= cutoff)
    return SpectrumTable(kept, float(min(cutoff, table.cutoff)))


_MESH_SPECTRA: dict[str, SpectrumTable] = {}


def _cached_mesh_spectrum(key: str, mesh: Mesh, cutoff: float) -> SpectrumTable:
    """Reuse the widest spectrum computed so far for this mesh file."""
    table = _MESH_SPECTRA.get(key)
    if table is None or table.cutoff < cutoff:
        table = mesh_spectrum(mesh, cutoff)
        _MESH_SPECTRA[key] = table
    kept = tuple(e for e in table.entries if e.eigenvalue <= cutoff)
    return SpectrumTable(kept, float(min(cutoff, table.cutoff)))


def component_spectrum(component: SurfaceComponent, cutoff: float) -> SpectrumTable:
    """Function spectrum of one component, including its area scale."""
    c = component.area_scale
    metric = component.metric
    if isinstance(metric, RoundSphere):
        table = sphere_spectrum(metric.radius, cutoff * c)
    elif isinstance(metric, FlatTorus):
        table = torus_spectrum(metric.lattice, cutoff * c)
    elif isinstance(metric, MeshMetric):
        mesh = _cached_mesh(str(metric.path))
        if mesh.n_components != 1:
            raise MeshError(f"mesh {metric.path} has {mesh.n_components} components; "
                            "declare one surface component per connected mesh")
        if mesh.genus != component.genus:
            raise MeshError(f"mesh {metric.path} has genus {mesh.genus}, "
                            f"component declares genus {component.genus}")
        table = _cached_mesh_spectrum(str(metric.path), mesh, cutoff * c)
    else:
        raise TypeError(f"unknown metric {metric!r}")
    return table.scaled(c) if c != 1.0 else table


def surface_spectrum(surface: BoundarySurface, cutoff: float) -> SpectrumTable:
    """Sorted merge of the component spectra, labelled by component id."""
    tables = [component_spectrum(comp, cutoff).relabeled(i)
              for i, comp in enumerate(surface.components)]
    return merge_tables(tables)
