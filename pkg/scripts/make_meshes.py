"""Generate the OFF meshes used by the test suite and the examples.

Writes into ``tests/data`` by default:

* ``icosahedron.off`` and ``icosphere_L{1..4}.off`` (unit sphere)
* ``clifford_torus_N{n}.4off``: flat torus of side about 2π, embedded in R^4
* ``genus2.off``: marching-cubes level set of two fused tori
* ``two_spheres.off`` and ``open_sphere.off`` for validation cases
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from monopole_vdim.mesh import write_off


def icosahedron():
    t = (1 + 5**0.5) / 2
    v = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return v / np.linalg.norm(v, axis=1, keepdims=True), f


def subdivide(v, f):
    """Split every triangle in four and project back to the unit sphere."""
    verts = list(v)
    cache = {}

    def midpoint(a, b):
        key = (min(a, b), max(a, b))
        if key not in cache:
            p = verts[a] + verts[b]
            verts.append(p / np.linalg.norm(p))
            cache[key] = len(verts) - 1
        return cache[key]

    faces = []
    for a, b, c in f:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(verts), np.array(faces)


def icosphere(level):
    v, f = icosahedron()
    for _ in range(level):
        v, f = subdivide(v, f)
    return v, f


def clifford_torus(n):
    """Intrinsically flat torus: every triangle is isometric to a planar one."""
    theta = 2 * np.pi * np.arange(n) / n
    a, b = np.meshgrid(theta, theta, indexing="ij")
    # rescale so that each side of the polyhedral torus has length 2π
    s = np.pi / (n * np.sin(np.pi / n))
    v = s * np.stack([np.cos(a), np.sin(a), np.cos(b), np.sin(b)], axis=-1).reshape(-1, 4)
    idx = lambda i, j: (i % n) * n + (j % n)
    faces = []
    for i in range(n):
        for j in range(n):
            faces.append([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)])
            faces.append([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)])
    return v, np.array(faces)


def genus_two(resolution=72):
    from skimage.measure import marching_cubes

    R, r = 1.0, 0.4
    grid = np.linspace(-2.6, 2.6, resolution)
    x, y, z = np.meshgrid(grid, grid, grid, indexing="ij")

    def torus(cx):
        q = np.sqrt((x - cx) ** 2 + y**2) - R
        return np.sqrt(q**2 + z**2) - r

    field = np.minimum(torus(-1.1), torus(1.1))
    verts, faces, _, _ = marching_cubes(field, level=0.0, spacing=(grid[1] - grid[0],) * 3)
    return verts + grid[0], faces


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests" / "data")
    parser.add_argument("--torus-n", type=int, default=48)
    args = parser.parse_args(argv)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    write_off(out / "icosahedron.off", *icosahedron())
    for level in range(1, 5):
        write_off(out / f"icosphere_L{level}.off", *icosphere(level))
    write_off(out / f"clifford_torus_N{args.torus_n}.4off", *clifford_torus(args.torus_n))
    write_off(out / "genus2.off", *genus_two())

    v, f = icosphere(2)
    write_off(out / "two_spheres.off",
              np.vstack([v, v + [3.0, 0.0, 0.0]]), np.vstack([f, f + len(v)]))
    write_off(out / "open_sphere.off", v, f[1:])
    print(f"meshes written to {out}")


if __name__ == "__main__":
    main()
