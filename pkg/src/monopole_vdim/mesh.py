"""OFF triangle meshes and the cotangent-weight function Laplacian.

Meshes are read from ASCII OFF; ``4OFF`` files (four coordinates per vertex)
are accepted as well, which lets an exactly flat torus be given as a
polyhedral Clifford torus in R^4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .spectrum import MESH_GAP, SpectrumEntry, SpectrumTable, cluster_eigenvalues

AREA_TOL = 1e-14


class MeshError(ValueError):
    """Invalid or unparsable mesh."""


class SpectrumError(RuntimeError):
    """Eigensolver failure."""


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    faces: np.ndarray
    path: str | None = None
    component_labels: np.ndarray = field(repr=False, default=None)
    euler_characteristics: tuple[int, ...] = ()

    @property
    def n_components(self) -> int:
        return len(self.euler_characteristics)

    @property
    def euler_characteristic(self) -> int:
        return sum(self.euler_characteristics)

    @property
    def genera(self) -> tuple[int, ...]:
        return tuple(1 - chi // 2 for chi in self.euler_characteristics)

    @property
    def genus(self) -> int:
        if self.n_components != 1:
            raise MeshError(f"mesh has {self.n_components} components; genus is per component")
        return self.genera[0]

    def area(self) -> float:
        return float(triangle_areas(self.vertices, self.faces).sum())


def _line_tokens(text: str):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, raw, line.split()))
    return lines


def _num(tok: str, lineno: int, raw: str, kind=float):
    try:
        return kind(tok)
    except ValueError:
        col = raw.find(tok) + 1
        raise MeshError(f"parse error at line {lineno}, column {col}: "
                        f"expected {kind.__name__}, got {tok!r}") from None


def parse_off(text: str, path: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    lines = _line_tokens(text)
    if not lines:
        raise MeshError("parse error at line 1, column 1: empty file")
    lineno, raw, toks = lines[0]
    header = toks[0]
    if header not in ("OFF", "4OFF"):
        raise MeshError(f"parse error at line {lineno}, column 1: expected 'OFF' header, got {header!r}")
    dim = 4 if header == "4OFF" else 3
    rest = toks[1:]
    pos = 1
    if not rest:
        if len(lines) < 2:
            raise MeshError(f"parse error at line {lineno + 1}, column 1: missing counts line")
        lineno, raw, rest = lines[1]
        pos = 2
    if len(rest) < 2:
        raise MeshError(f"parse error at line {lineno}, column 1: expected 'V F E' counts")
    nv = _num(rest[0], lineno, raw, int)
    nf = _num(rest[1], lineno, raw, int)
    if len(lines) < pos + nv + nf:
        last = lines[-1][0]
        raise MeshError(f"parse error at line {last + 1}, column 1: expected {nv} vertices "
                        f"and {nf} faces, file ends early")
    verts = np.empty((nv, dim))
    for i in range(nv):
        lineno, raw, toks = lines[pos + i]
        if len(toks) < dim:
            raise MeshError(f"parse error at line {lineno}, column 1: vertex needs {dim} coordinates")
        verts[i] = [_num(t, lineno, raw) for t in toks[:dim]]
    pos += nv
    faces = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        lineno, raw, toks = lines[pos + i]
        count = _num(toks[0], lineno, raw, int)
        if count != 3:
            raise MeshError(f"parse error at line {lineno}, column 1: only triangles supported, "
                            f"face has {count} vertices")
        if len(toks) < 4:
            raise MeshError(f"parse error at line {lineno}, column 1: face needs 3 indices")
        idx = [_num(t, lineno, raw, int) for t in toks[1:4]]
        for t, v in zip(toks[1:4], idx):
            if not 0 <= v < nv:
                col = raw.find(t) + 1
                raise MeshError(f"parse error at line {lineno}, column {col}: "
                                f"vertex index {v} out of range")
        faces[i] = idx
    return verts, faces


def validate_topology(n_vertices: int, faces: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Check closed, manifold, consistently oriented; return component labels and χ's."""
    for f in faces:
        if len(set(f.tolist())) < 3:
            raise MeshError(f"degenerate face {f.tolist()} repeats a vertex")
    used = np.zeros(n_vertices, dtype=bool)
    used[faces.ravel()] = True
    if not used.all():
        raise MeshError(f"unreferenced vertex {int(np.argmin(used))}")

    directed: dict[tuple[int, int], int] = {}
    undirected: dict[tuple[int, int], int] = {}
    for fi, (a, b, c) in enumerate(faces.tolist()):
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            undirected[key] = undirected.get(key, 0) + 1
            if (u, v) in directed:
                if undirected[key] > 2:
                    raise MeshError(f"non-manifold edge {key}")
                raise MeshError(f"inconsistent orientation at edge {key}")
            directed[(u, v)] = fi
    for key, count in undirected.items():
        if count > 2:
            raise MeshError(f"non-manifold edge {key}")
        if count == 1:
            raise MeshError(f"boundary edge present {key}")

    # vertex links must be single cycles
    nxt: dict[int, dict[int, int]] = {}
    for a, b, c in faces.tolist():
        for v, p, q in ((a, b, c), (b, c, a), (c, a, b)):
            nxt.setdefault(v, {})[p] = q
    for v, link in nxt.items():
        start = next(iter(link))
        cur, steps = start, 0
        while True:
            cur = link[cur]
            steps += 1
            if cur == start or steps > len(link):
                break
        if steps != len(link):
            raise MeshError(f"non-manifold vertex {v}")

    rows = np.concatenate([faces[:, 0], faces[:, 1], faces[:, 2]])
    cols = np.concatenate([faces[:, 1], faces[:, 2], faces[:, 0]])
    graph = sp.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_vertices, n_vertices))
    ncomp, labels = connected_components(graph, directed=False)
    chis = []
    edge_keys = np.array(list(undirected.keys()))
    face_labels = labels[faces[:, 0]]
    edge_labels = labels[edge_keys[:, 0]]
    for c in range(ncomp):
        nv = int(np.sum(labels == c))
        ne = int(np.sum(edge_labels == c))
        nf = int(np.sum(face_labels == c))
        chis.append(nv - ne + nf)
    return labels, tuple(chis)


def load_mesh(path) -> Mesh:
    """Read and validate an OFF mesh."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MeshError(f"cannot read mesh {path}: {exc}") from exc
    verts, faces = parse_off(text, str(path))
    labels, chis = validate_topology(len(verts), faces)
    return Mesh(verts, faces, str(path), labels, chis)


def mesh_from_arrays(vertices, faces) -> Mesh:
    verts = np.asarray(vertices, dtype=float)
    faces = np.asarray(faces, dtype=np.int64)
    labels, chis = validate_topology(len(verts), faces)
    return Mesh(verts, faces, None, labels, chis)


def write_off(path, vertices, faces) -> None:
    vertices = np.asarray(vertices, dtype=float)
    header = "4OFF" if vertices.shape[1] == 4 else "OFF"
    lines = [header, f"{len(vertices)} {len(faces)} 0"]
    lines += [" ".join(f"{x:.17g}" for x in v) for v in vertices]
    lines += [f"3 {a} {b} {c}" for a, b, c in np.asarray(faces)]
    Path(path).write_text("\n".join(lines) + "\n")


def triangle_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    p0, p1, p2 = (vertices[faces[:, i]] for i in range(3))
    u, v = p1 - p0, p2 - p0
    # Gram determinant works in any ambient dimension
    uu, vv, uv = (u * u).sum(1), (v * v).sum(1), (u * v).sum(1)
    return 0.5 * np.sqrt(np.maximum(uu * vv - uv * uv, 0.0))


def cotan_laplacian(mesh: Mesh) -> tuple[sp.csr_matrix, np.ndarray]:
    """Stiffness matrix (positive semidefinite) and lumped vertex areas.

    Vertex areas follow the mixed-Voronoi rule: circumcentric dual areas on
    non-obtuse triangles, barycentric-style splits on obtuse ones.
    """
    V, F = mesh.vertices, mesh.faces
    areas = triangle_areas(V, F)
    scale = max(float(np.max(areas)), 1.0) if len(areas) else 1.0
    bad = np.nonzero(areas <= AREA_TOL * scale)[0]
    if len(bad):
        raise MeshError(f"degenerate triangle {int(bad[0])} (area {areas[bad[0]]:.3e})")
    n = len(V)
    rows, cols, vals = [], [], []
    mass = np.zeros(n)
    corner = [V[F[:, i]] for i in range(3)]
    cots = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        u = corner[j] - corner[i]
        w = corner[k] - corner[i]
        cots.append((u * w).sum(1) / (2.0 * areas))
    cots = np.array(cots)  # cot of the angle at corner i
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        weight = 0.5 * cots[i]  # edge (j, k) opposite corner i
        rows += [F[:, j], F[:, k], F[:, j], F[:, k]]
        cols += [F[:, k], F[:, j], F[:, j], F[:, k]]
        vals += [-weight, -weight, weight, weight]
    L = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))
    # mixed Voronoi areas
    sq = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        e = corner[k] - corner[j]
        sq.append((e * e).sum(1))  # squared length of edge opposite corner i
    sq = np.array(sq)
    obtuse = cots < 0
    any_obtuse = obtuse.any(axis=0)
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        voronoi = (sq[j] * cots[j] + sq[k] * cots[k]) / 8.0
        part = np.where(any_obtuse, np.where(obtuse[i], areas / 2.0, areas / 4.0), voronoi)
        np.add.at(mass, F[:, i], part)
    return L, mass


def dec_function_spectrum(mesh: Mesh, count: int, component: int = 0) -> SpectrumTable:
    """Smallest ``count`` eigenvalues of the cotangent Laplacian with lumped mass.

    The returned table is complete up to the last fully resolved cluster.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    n = len(mesh.vertices)
    count = min(count, n)
    L, mass = cotan_laplacian(mesh)
    dinv = 1.0 / np.sqrt(mass)
    A = sp.diags(dinv) @ L @ sp.diags(dinv)
    A = 0.5 * (A + A.T)
    if count >= n - 1 or n <= 600:
        vals = np.linalg.eigvalsh(A.toarray())[:count]
    else:
        try:
            shift = -1e-6 * float(np.abs(A.diagonal()).mean())
            # fixed start vector for reproducibility; a few extra Ritz values
            # guard against dropping copies of a degenerate eigenvalue
            v0 = np.random.default_rng(0).standard_normal(n)
            k = min(count + 8, n - 2)
            vals = eigsh(A.tocsc(), k=k, sigma=shift, which="LM", v0=v0,
                         return_eigenvectors=False, tol=1e-12, maxiter=20 * n)
        except ArpackNoConvergence as exc:
            raise SpectrumError(f"eigensolver did not converge for {count} eigenvalues") from exc
        vals = np.sort(vals)[:count]
    lam_max = max(float(np.max(np.abs(vals))), 1.0)
    clusters = cluster_eigenvalues(vals, MESH_GAP, zero_tol=1e-8 * lam_max)
    if clusters and clusters[0][0] == 0.0 and clusters[0][1] != mesh.n_components:
        raise SpectrumError(f"found {clusters[0][1]} zero eigenvalues for "
                            f"{mesh.n_components} connected components")
    entries = tuple(SpectrumEntry(v, m, component) for v, m in clusters)
    if count == n:
        cutoff = float("inf")
    elif len(clusters) > 1:
        cutoff = clusters[-2][0] * (1 + MESH_GAP / 2)
    else:
        cutoff = 0.0
    return SpectrumTable(entries, cutoff)
