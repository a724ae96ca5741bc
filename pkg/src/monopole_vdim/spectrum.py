"""Spectrum tables: clustered eigenvalues with multiplicities."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

ANALYTIC_GAP = 1e-6
MESH_GAP = 1e-3


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    component: int = 0


@dataclass(frozen=True)
class SpectrumTable:
    """Sorted eigenvalue clusters; everything <= ``cutoff`` is complete."""

    entries: tuple[SpectrumEntry, ...]
    cutoff: float

    def __post_init__(self):
        ordered = tuple(sorted(self.entries, key=lambda e: (e.eigenvalue, e.component)))
        object.__setattr__(self, "entries", ordered)
        for e in ordered:
            if e.multiplicity < 1:
                raise ValueError(f"multiplicity must be positive: {e}")
            if e.eigenvalue < 0:
                raise ValueError(f"negative Laplace eigenvalue: {e}")

    def complete(self) -> tuple[SpectrumEntry, ...]:
        edge = self.cutoff * (1 + 1e-12)
        return tuple(e for e in self.entries if e.eigenvalue <= edge)

    def nonzero(self) -> tuple[SpectrumEntry, ...]:
        return tuple(e for e in self.complete() if e.eigenvalue > 0)

    def zero_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries if e.eigenvalue == 0)

    def eigenvalues(self) -> np.ndarray:
        """Complete eigenvalues repeated by multiplicity."""
        return np.repeat([e.eigenvalue for e in self.complete()],
                         [e.multiplicity for e in self.complete()]).astype(float)

    def scaled(self, area_scale: float) -> "SpectrumTable":
        """Spectrum after multiplying the metric by ``area_scale``."""
        if area_scale <= 0:
            raise ValueError("area_scale must be positive")
        return SpectrumTable(
            tuple(replace(e, eigenvalue=e.eigenvalue / area_scale) for e in self.entries),
            self.cutoff / area_scale,
        )

    def relabeled(self, component: int) -> "SpectrumTable":
        return SpectrumTable(tuple(replace(e, component=component) for e in self.entries), self.cutoff)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["component", "eigenvalue", "multiplicity"])
        for e in self.complete():
            writer.writerow([e.component, f"{e.eigenvalue:.12g}", e.multiplicity])
        return buf.getvalue()


def merge_tables(tables: Sequence[SpectrumTable]) -> SpectrumTable:
    """Disjoint union: sorted merge, complete up to the smallest cutoff."""
    if not tables:
        raise ValueError("no spectra to merge")
    entries = tuple(e for t in tables for e in t.entries)
    return SpectrumTable(entries, min(t.cutoff for t in tables))


def cluster_eigenvalues(values: Iterable[float], rel_gap: float, zero_tol: float = 0.0
                        ) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose consecutive relative gap is below ``rel_gap``.

    Values with magnitude <= ``zero_tol`` are snapped to exactly zero. Each
    cluster is reported by its mean.
    """
    vals = np.sort(np.asarray(list(values), dtype=float))
    vals = np.where(np.abs(vals) <= zero_tol, 0.0, vals)
    clusters: list[list[float]] = []
    for v in vals:
        if clusters:
            last = clusters[-1][-1]
            scale = max(abs(v), abs(last))
            if v == last or (scale > 0 and last != 0 and (v - last) <= rel_gap * scale):
                clusters[-1].append(v)
                continue
        clusters.append([v])
    return [(float(np.mean(c)), len(c)) for c in clusters]
