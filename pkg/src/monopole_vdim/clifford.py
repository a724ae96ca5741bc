"""Exact exterior/Clifford algebra over an oriented Euclidean R^n.

Elements are sparse maps from blades (strictly increasing index tuples) to
Gaussian rationals. The Clifford relation is ``v * v = -|v|^2`` for grade-1
``v``, and a form ``e_I`` is identified with the Clifford product
``e_{i1} e_{i2} ... e_{ik}`` of an orthonormal frame. Index 0 plays the role
of the inward normal ``x^2 d/dx`` near the boundary, indices ``1..n-1`` are
tangential.

Everything here is exact; floating point only appears in ``to_numpy``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

Blade = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))
I_UNIT = GaussianRational(Fraction(0), Fraction(1))


def i_power(p: int) -> GaussianRational:
    """Return i**p exactly."""
    return (ONE, I_UNIT, -ONE, -I_UNIT)[p % 4]


def blade_label(blade: Blade) -> str:
    return "e" + "".join(str(i) for i in blade) if blade else "1"


def basis_blades(n: int, grades: Iterable[int] | None = None) -> list[Blade]:
    """Blades of Lambda* R^n ordered by grade, then lexicographically."""
    grades = range(n + 1) if grades is None else sorted(set(grades))
    return [b for k in grades for b in itertools.combinations(range(n), k)]


def _blade_product(a: Blade, b: Blade) -> tuple[int, Blade]:
    """Clifford product of two basis blades with e_i e_i = -1."""
    out = list(a)
    sign = 1
    for j in b:
        # move e_j leftwards past every larger index already present
        swaps = sum(1 for x in out if x > j)
        if swaps % 2:
            sign = -sign
        if j in out:
            out.remove(j)
            sign = -sign
        else:
            out.append(j)
            out.sort()
    return sign, tuple(out)


def _blade_wedge(a: Blade, b: Blade) -> tuple[int, Blade]:
    if set(a) & set(b):
        return 0, ()
    return _blade_product(a, b)


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class CliffordElement:
    """Multivector in Cl(R^n) with exact Gaussian-rational coefficients.

    ``a * b`` is the Clifford product, ``a ^ b`` the wedge product.
    """

    dimension: int
    terms: tuple[tuple[Blade, GaussianRational], ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        merged: dict[Blade, GaussianRational] = {}
        for blade, c in self.terms:
            blade = tuple(blade)
            if any(i < 0 or i >= self.dimension for i in blade):
                raise ValueError(f"blade {blade} out of range for n={self.dimension}")
            if any(x >= y for x, y in zip(blade, blade[1:])):
                raise ValueError(f"blade {blade} is not strictly increasing")
            merged[blade] = merged.get(blade, ZERO) + GaussianRational.coerce(c)
        clean = tuple(sorted(((b, c) for b, c in merged.items() if c), key=_blade_key))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_map(cls, n: int, coeffs: Mapping[Blade, object]) -> "CliffordElement":
        return cls(n, tuple((tuple(b), GaussianRational.coerce(c)) for b, c in coeffs.items()))

    @property
    def coefficients(self) -> dict[Blade, GaussianRational]:
        return dict(self.terms)

    def coefficient(self, blade: Blade) -> GaussianRational:
        return self.coefficients.get(tuple(blade), ZERO)

    def grades(self) -> set[int]:
        return {len(b) for b, _ in self.terms}

    def grade_part(self, k: int) -> "CliffordElement":
        return CliffordElement(self.dimension, tuple((b, c) for b, c in self.terms if len(b) == k))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CliffordElement"):
        if not isinstance(other, CliffordElement):
            raise TypeError(f"expected CliffordElement, got {type(other).__name__}")
        if other.dimension != self.dimension:
            raise ValueError(f"dimension mismatch: {self.dimension} vs {other.dimension}")

    def __add__(self, other):
        self._check(other)
        return CliffordElement(self.dimension, self.terms + other.terms)

    def __neg__(self):
        return CliffordElement(self.dimension, tuple((b, -c) for b, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CliffordElement":
        c = GaussianRational.coerce(c)
        return CliffordElement(self.dimension, tuple((b, c * v) for b, v in self.terms))

    def __mul__(self, other):
        if not isinstance(other, CliffordElement):
            return self.scale(other)
        return clifford_product(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c}){blade_label(b)}" for b, c in self.terms)


def _blade_key(item):
    blade = item[0]
    return (len(blade), blade)


def blade(indices: Iterable[int], n: int, coeff=1) -> CliffordElement:
    """Basis element e_I; indices are sorted with the permutation sign applied."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return CliffordElement(n)
    sign = _permutation_sign(indices)
    return CliffordElement(n, ((tuple(sorted(indices)), GaussianRational.coerce(coeff) * sign),))


def basis_vector(i: int, n: int) -> CliffordElement:
    return blade((i,), n)


def scalar(c, n: int) -> CliffordElement:
    return CliffordElement(n, (((), GaussianRational.coerce(c)),))


def covector(components: Sequence, n: int | None = None) -> CliffordElement:
    n = len(components) if n is None else n
    return CliffordElement(n, tuple(((i,), GaussianRational.coerce(c)) for i, c in enumerate(components)))


def _bilinear(a: CliffordElement, b: CliffordElement, rule) -> CliffordElement:
    a._check(b)
    out: dict[Blade, GaussianRational] = {}
    for ba, ca in a.terms:
        for bb, cb in b.terms:
            sign, res = rule(ba, bb)
            if sign:
                out[res] = out.get(res, ZERO) + ca * cb * sign
    return CliffordElement.from_map(a.dimension, out)


def wedge(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Exterior product."""
    return _bilinear(a, b, _blade_wedge)


def clifford_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Clifford product with v v = -|v|^2 on grade-1 elements."""
    return _bilinear(a, b, _blade_product)


def interior(v: CliffordElement, a: CliffordElement) -> CliffordElement:
    """Interior product v ⌟ a of a grade-1 element into a form."""
    v._check(a)
    if v.grades() - {1}:
        raise ValueError("interior product needs a grade-1 element")
    out: dict[Blade, GaussianRational] = {}
    for (i,), cv in v.terms:
        for bb, cb in a.terms:
            if i in bb:
                pos = bb.index(i)
                res = bb[:pos] + bb[pos + 1:]
                out[res] = out.get(res, ZERO) + cv * cb * (-1) ** pos
    return CliffordElement.from_map(a.dimension, out)


def hodge_star(a: CliffordElement, n: int | None = None) -> CliffordElement:
    """Hodge star for the standard orientation, alpha ∧ ⋆beta = <alpha, beta> vol.

    Accepts mixed-grade input and acts grade by grade.
    """
    n = a.dimension if n is None else n
    if n != a.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {n}")
    out: dict[Blade, GaussianRational] = {}
    for b, c in a.terms:
        comp = tuple(i for i in range(n) if i not in b)
        sign = _permutation_sign(b + comp)
        out[comp] = out.get(comp, ZERO) + c * sign
    return CliffordElement.from_map(n, out)


def hodge_star_homogeneous(a: CliffordElement, n: int | None = None) -> CliffordElement:
    """Hodge star restricted to homogeneous input; raises on mixed grades."""
    if len(a.grades()) > 1:
        raise ValueError(f"hodge_star expects a homogeneous form, got grades {sorted(a.grades())}")
    return hodge_star(a, n)


def tau(k: int, n: int) -> GaussianRational:
    """Sign operator i^{k(k-1) + 2nk + [(n+1)/2]} on Lambda^k R^n."""
    if not 0 <= k <= n:
        raise ValueError(f"degree k={k} out of range 0..{n}")
    value = i_power(k * (k - 1) + 2 * n * k + (n + 1) // 2)
    if n % 4 == 3:
        # real for n = 3 mod 4; n = 1 mod 4 gives ±i
        assert value.im == 0, "tau must be real for n = 3 mod 4"
    return value


def apply_tau(a: CliffordElement) -> CliffordElement:
    n = a.dimension
    return CliffordElement(n, tuple((b, c * tau(len(b), n)) for b, c in a.terms))


def volume_element(n: int) -> CliffordElement:
    """Normalized complex volume element i^{[(n+1)/2]} e_0 e_1 ... e_{n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return blade(range(n), n, i_power((n + 1) // 2))


def boundary_volume_element(n: int) -> CliffordElement:
    """Complex volume element of the tangential frame e_1 ... e_{n-1}."""
    m = n - 1
    if m < 1:
        raise ValueError("boundary volume element needs n >= 2")
    return blade(range(1, n), n, i_power((m + 1) // 2))


# ---------------------------------------------------------------------------
# endomorphisms of Lambda* R^n


@dataclass(frozen=True)
class FormEndomorphism:
    """Linear map of Lambda* R^n written in the fixed blade order.

    ``matrix[i][j]`` is the coefficient of ``basis[i]`` in the image of
    ``basis[j]``; rows/columns outside the declared grades are zero.
    """

    n: int
    matrix: tuple[tuple[GaussianRational, ...], ...]
    domain_grades: frozenset[int] = field(default=None)
    codomain_grades: frozenset[int] = field(default=None)

    def __post_init__(self):
        all_grades = frozenset(range(self.n + 1))
        if self.domain_grades is None:
            object.__setattr__(self, "domain_grades", all_grades)
        if self.codomain_grades is None:
            object.__setattr__(self, "codomain_grades", all_grades)
        object.__setattr__(self, "domain_grades", frozenset(self.domain_grades))
        object.__setattr__(self, "codomain_grades", frozenset(self.codomain_grades))
        size = 2 ** self.n
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise ValueError(f"matrix must be {size}x{size}")
        basis = self.basis
        for i, row in enumerate(self.matrix):
            for j, c in enumerate(row):
                if c and (len(basis[i]) not in self.codomain_grades
                          or len(basis[j]) not in self.domain_grades):
                    raise ValueError(
                        f"nonzero entry outside declared grades at "
                        f"({blade_label(basis[i])}, {blade_label(basis[j])})")

    @property
    def basis(self) -> list[Blade]:
        return basis_blades(self.n)

    @classmethod
    def from_map(cls, n: int, fn: Callable[[CliffordElement], CliffordElement],
                 domain_grades: Iterable[int] | None = None,
                 codomain_grades: Iterable[int] | None = None) -> "FormEndomorphism":
        basis = basis_blades(n)
        dom = frozenset(range(n + 1) if domain_grades is None else domain_grades)
        cols = []
        for b in basis:
            if len(b) in dom:
                image = fn(blade(b, n)).coefficients
                cols.append([image.get(r, ZERO) for r in basis])
            else:
                cols.append([ZERO] * len(basis))
        matrix = tuple(tuple(cols[j][i] for j in range(len(basis))) for i in range(len(basis)))
        return cls(n, matrix, dom, codomain_grades)

    @classmethod
    def identity(cls, n: int, grades: Iterable[int] | None = None) -> "FormEndomorphism":
        grades = frozenset(range(n + 1) if grades is None else grades)
        return cls.from_map(n, lambda x: x, grades, grades)

    @classmethod
    def left_multiplication(cls, element: CliffordElement,
                            grades: Iterable[int] | None = None) -> "FormEndomorphism":
        n = element.dimension
        grades = frozenset(range(n + 1) if grades is None else grades)
        return cls.from_map(n, lambda x: clifford_product(element, x), grades, grades)

    def apply(self, a: CliffordElement) -> CliffordElement:
        if a.dimension != self.n:
            raise ValueError(f"dimension mismatch: {a.dimension} vs {self.n}")
        basis = self.basis
        index = {b: i for i, b in enumerate(basis)}
        out: dict[Blade, GaussianRational] = {}
        for b, c in a.terms:
            j = index[b]
            for i, row in enumerate(self.matrix):
                if row[j]:
                    out[basis[i]] = out.get(basis[i], ZERO) + row[j] * c
        return CliffordElement.from_map(self.n, out)

    def __matmul__(self, other: "FormEndomorphism") -> "FormEndomorphism":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        size = len(self.matrix)
        prod = []
        for i in range(size):
            row = []
            for j in range(size):
                acc = ZERO
                for k in range(size):
                    a, b = self.matrix[i][k], other.matrix[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            prod.append(tuple(row))
        return FormEndomorphism(self.n, tuple(prod), other.domain_grades, self.codomain_grades)

    def __add__(self, other: "FormEndomorphism") -> "FormEndomorphism":
        mat = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix))
        return FormEndomorphism(self.n, mat, self.domain_grades | other.domain_grades,
                                self.codomain_grades | other.codomain_grades)

    def scale(self, c) -> "FormEndomorphism":
        c = GaussianRational.coerce(c)
        mat = tuple(tuple(c * a for a in row) for row in self.matrix)
        return FormEndomorphism(self.n, mat, self.domain_grades, self.codomain_grades)

    def restricted(self, grades: Iterable[int]) -> list[list[GaussianRational]]:
        """Square block on the given grades (rows and columns in blade order)."""
        grades = set(grades)
        idx = [i for i, b in enumerate(self.basis) if len(b) in grades]
        return [[self.matrix[i][j] for j in idx] for i in idx]

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(c) for c in row] for row in self.matrix])

    def to_csv(self) -> str:
        """Row-major CSV dump with a header row of blade labels."""
        labels = [blade_label(b) for b in self.basis]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row"] + labels)
        for label, row in zip(labels, self.matrix):
            writer.writerow([label] + [str(c) for c in row])
        return buf.getvalue()


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q(i) by fraction-exact Gaussian elimination."""
    mat = [[GaussianRational.coerce(c) for c in row] for row in rows]
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col].inverse()
        for r in range(nrows):
            if r != rank and mat[r][col]:
                factor = mat[r][col] * inv
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def odd_grades(n: int) -> frozenset[int]:
    return frozenset(k for k in range(n + 1) if k % 2 == 1)


def odd_signature_symbol(xi: CliffordElement, n: int | None = None) -> FormEndomorphism:
    """Clifford action of a covector for the odd signature operator.

    Built as ⋆τ(ξ∧· − ξ⌟·) on odd forms and checked against left
    multiplication by ω_C ξ; a mismatch raises AssertionError.
    """
    n = xi.dimension if n is None else n
    if xi.dimension != n:
        raise ValueError("dimension mismatch")
    if xi.grades() - {1}:
        raise ValueError("xi must be a grade-1 element")
    if xi.is_zero():
        raise ValueError("xi must be a nonzero covector")
    odd = odd_grades(n)

    def via_forms(x):
        return hodge_star(apply_tau(wedge(xi, x) - interior(xi, x)))

    omega = volume_element(n)
    from_forms = FormEndomorphism.from_map(n, via_forms, odd, odd)
    from_clifford = FormEndomorphism.from_map(n, lambda x: omega * xi * x, odd, odd)
    assert from_forms.matrix == from_clifford.matrix, "⋆τ(ξ∧ − ξ⌟) differs from ω_C ξ·"
    return from_forms


def induced_boundary_action(j: int, n: int) -> FormEndomorphism:
    """Boundary Clifford action cl_∂(e_j) = -e_j e_0 · on odd forms."""
    if not 1 <= j <= n - 1:
        raise ValueError(f"tangential index j={j} out of range 1..{n - 1}")
    element = -(basis_vector(j, n) * basis_vector(0, n))
    return FormEndomorphism.left_multiplication(element, odd_grades(n))


def boundary_identification(b: Blade) -> tuple[int, Blade]:
    """Image of an odd blade of X under Lambda^odd X|_∂ ≅ Lambda* ∂X.

    ``e_0 e_I -> e_I`` and ``e_J -> e_J``; returns (sign, boundary blade) with
    boundary indices kept in the 1..n-1 labelling.
    """
    if b and b[0] == 0:
        return 1, b[1:]
    return 1, b


def identify_to_boundary(a: CliffordElement) -> CliffordElement:
    """Push an odd form of X to a form on the boundary (still labelled in R^n)."""
    out: dict[Blade, GaussianRational] = {}
    for b, c in a.terms:
        if len(b) % 2 == 0:
            raise ValueError(f"{blade_label(b)} is not an odd form")
        sign, target = boundary_identification(b)
        out[target] = out.get(target, ZERO) + c * sign
    return CliffordElement.from_map(a.dimension, out)


def identify_from_boundary(a: CliffordElement) -> CliffordElement:
    """Inverse of :func:`identify_to_boundary`."""
    out: dict[Blade, GaussianRational] = {}
    for b, c in a.terms:
        if 0 in b:
            raise ValueError(f"{blade_label(b)} is not a boundary form")
        target = b if len(b) % 2 == 1 else (0,) + b
        out[target] = out.get(target, ZERO) + c
    return CliffordElement.from_map(a.dimension, out)


def n_operator(k: int, m: int) -> int:
    """Degree-zero operator N on Lambda^k of an m-dimensional boundary."""
    if not 0 <= k <= m:
        raise ValueError(f"degree k={k} out of range 0..{m}")
    return k if k % 2 == 1 else m - k


def connection_generator(i: int, n: int) -> Callable[[CliffordElement], CliffordElement]:
    """Derivation action of E_{0i} (e_i -> e_0, e_0 -> -e_i) on Lambda* R^n."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"tangential index i={i} out of range 1..{n - 1}")

    def act(a: CliffordElement) -> CliffordElement:
        out = CliffordElement(n)
        for b, c in a.terms:
            for pos, idx in enumerate(b):
                if idx == i:
                    image = blade(b[:pos] + (0,) + b[pos + 1:], n)
                elif idx == 0:
                    image = blade(b[:pos] + (i,) + b[pos + 1:], n, -1)
                else:
                    continue
                out = out + image.scale(c)
        return out

    return act
