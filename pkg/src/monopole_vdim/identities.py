"""Exact checks of the odd-signature-operator algebra at the boundary.

Each ``check_*`` function returns an :class:`IdentityCheck` listing the
offending basis elements on failure; :func:`verify_clifford` runs the whole
suite for one odd dimension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .clifford import (
    FormEndomorphism,
    I_UNIT,
    CliffordElement,
    apply_tau,
    basis_blades,
    basis_vector,
    blade,
    blade_label,
    boundary_volume_element,
    clifford_product,
    connection_generator,
    covector,
    exact_rank,
    hodge_star,
    identify_to_boundary,
    induced_boundary_action,
    interior,
    n_operator,
    odd_grades,
    odd_signature_symbol,
    scalar,
    volume_element,
    wedge,
)


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    failures: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failures": list(self.failures)}


@dataclass
class IdentityReport:
    n: int
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checks": [c.as_dict() for c in self.checks]}


def _check(name: str, failures: list[str]) -> IdentityCheck:
    return IdentityCheck(name, not failures, failures)


def _require_odd(n: int):
    if n % 2 == 0:
        raise ValueError(f"n odd required, got n={n}")
    if n < 3:
        raise ValueError(f"boundary identities need n >= 3, got n={n}")


def check_volume_element(n: int) -> IdentityCheck:
    omega = volume_element(n)
    square = omega * omega
    failures = [] if square == scalar(1, n) else [f"omega_C^2 = {square}"]
    return _check("volume_element_squares_to_one", failures)


def check_star_tau(n: int) -> IdentityCheck:
    """Left multiplication by ω_C agrees with ⋆τ on every basis form."""
    omega = volume_element(n)
    failures = []
    for b in basis_blades(n):
        x = blade(b, n)
        lhs, rhs = omega * x, hodge_star(apply_tau(x))
        if lhs != rhs:
            failures.append(f"{blade_label(b)}: omega_C* = {lhs}, star tau = {rhs}")
    return _check("omega_equals_star_tau", failures)


def check_symbol_square(n: int) -> IdentityCheck:
    """cl_odd(e_i)^2 = -Id on odd forms for every frame vector."""
    failures = []
    ident = FormEndomorphism.identity(n, odd_grades(n)).scale(-1)
    for i in range(n):
        sym = odd_signature_symbol(basis_vector(i, n))
        if (sym @ sym).matrix != ident.matrix:
            failures.append(f"cl_odd(e{i})^2 != -Id")
    return _check("symbol_squares_to_minus_identity", failures)


def check_anticommutation(n: int, samples: int = 5, seed: int = 0) -> IdentityCheck:
    """cl(ξ)cl(η) + cl(η)cl(ξ) = -2<ξ,η> Id for random rational covectors."""
    rng = random.Random(seed)
    failures = []
    odd = odd_grades(n)
    for _ in range(samples):
        xi = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]
        eta = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]
        if not any(xi) or not any(eta):
            continue
        a = odd_signature_symbol(covector(xi))
        b = odd_signature_symbol(covector(eta))
        dot = sum(x * y for x, y in zip(xi, eta))
        lhs = (a @ b) + (b @ a)
        rhs = FormEndomorphism.identity(n, odd).scale(-2 * dot)
        if lhs.matrix != rhs.matrix:
            failures.append(f"xi={xi}, eta={eta}")
    return _check("clifford_anticommutation", failures)


def check_chirality(n: int) -> IdentityCheck:
    """i·cl_odd(e_0) is the boundary chirality ω_C^{n-1} under the identification.

    Its ±1 eigenspaces therefore are the signature splitting of Λ*∂X, each of
    dimension 2^{n-2}.
    """
    failures = []
    m = n - 1
    chir = odd_signature_symbol(basis_vector(0, n)).scale(I_UNIT)
    omega_b = boundary_volume_element(n)
    for b in basis_blades(n, odd_grades(n)):
        x = blade(b, n)
        lhs = identify_to_boundary(chir.apply(x))
        rhs = omega_b * identify_to_boundary(x)
        if lhs != rhs:
            failures.append(f"{blade_label(b)}: i cl_odd(e0) -> {lhs}, omega_boundary -> {rhs}")
    ident = FormEndomorphism.identity(n, odd_grades(n))
    block_p = (ident + chir).restricted(odd_grades(n))
    block_m = (ident + chir.scale(-1)).restricted(odd_grades(n))
    half = 2 ** (m - 1)
    for label, block in (("+1", block_p), ("-1", block_m)):
        rank = exact_rank(block)
        if rank != half:
            failures.append(f"{label} eigenspace has dimension {rank}, expected {half}")
    sq = chir @ chir
    if sq.matrix != ident.matrix:
        failures.append("(i cl_odd(e0))^2 != Id")
    return _check("normal_symbol_chirality", failures)


def standard_boundary_action(j: int, x: CliffordElement) -> CliffordElement:
    """e_j ∧ x − e_j ⌟ x, the Clifford action on boundary forms."""
    e = basis_vector(j, x.dimension)
    return wedge(e, x) - interior(e, x)


def check_boundary_action(n: int) -> IdentityCheck:
    """cl_∂(e_j) = -e_j e_0 acts by the two displayed rules and squares to -1."""
    failures = []
    e0 = basis_vector(0, n)
    for j in range(1, n):
        ej = basis_vector(j, n)
        action = induced_boundary_action(j, n)
        for b in basis_blades(n, odd_grades(n)):
            x = blade(b, n)
            image = action.apply(x)
            if b and b[0] == 0:
                expected = ej * blade(b[1:], n)          # e_0 e_I -> e_j e_I
            else:
                expected = e0 * (ej * x)                 # e_J -> e_0 (e_j e_J)
            if image != expected:
                failures.append(f"cl_d(e{j}) {blade_label(b)} = {image}, rule gives {expected}")
            # identification turns it into the standard action on Lambda* dX
            lhs = identify_to_boundary(image)
            rhs = standard_boundary_action(j, identify_to_boundary(x))
            if lhs != rhs:
                failures.append(f"cl_d(e{j}) {blade_label(b)}: {lhs} vs standard {rhs}")
        sq = action @ action
        if sq.matrix != FormEndomorphism.identity(n, odd_grades(n)).scale(-1).matrix:
            failures.append(f"cl_d(e{j})^2 != -Id")
    return _check("boundary_clifford_action", failures)


def factorization_action(j: int, n: int) -> CliffordElement:
    """cl_odd(e_0)^{-1} cl_odd(e_j) as a Clifford element (equals e_j e_0)."""
    omega = volume_element(n)
    e0, ej = basis_vector(0, n), basis_vector(j, n)
    # cl_odd(e_0)^2 = -1, so its inverse is -cl_odd(e_0)
    return -(omega * e0) * (omega * ej)


def expected_connection_term(b: tuple[int, ...], n: int) -> int:
    """Eigenvalue of Σ_i c_i E_{0i} on a blade: minus N of the boundary form."""
    m = n - 1
    t = sum(1 for i in b if i != 0)
    return -(m - t) if 0 in b else -t


def verify_connection_correction(n: int) -> IdentityCheck:
    """Assemble Σ_i cl(e_0)^{-1}cl(e_i) ∘ E_{0i} and compare with −N.

    The Clifford factor is the one produced by factoring the Dirac operator
    through cl(e_0); with the derivation action of E_{0i} it reproduces the
    case table term by term and the diagonal −N on all 2^n basis forms.
    """
    _require_odd(n)
    failures = []
    m = n - 1
    for j in range(1, n):
        fac = factorization_action(j, n)
        if fac != basis_vector(j, n) * basis_vector(0, n):
            failures.append(f"cl(e0)^-1 cl(e{j}) = {fac}, expected e{j}e0")
    total = {}
    for b in basis_blades(n):
        x = blade(b, n)
        acc = CliffordElement(n)
        for i in range(1, n):
            term = clifford_product(factorization_action(i, n), connection_generator(i, n)(x))
            acc = acc + term
            if len(b) % 2 == 1:
                # displayed case table on odd forms
                if b[0] == 0:
                    want = CliffordElement(n) if i in b else -x
                else:
                    want = -x if i in b else CliffordElement(n)
                if term != want:
                    failures.append(f"i={i} on {blade_label(b)}: {term}, table gives {want}")
        total[b] = acc
        want = x.scale(expected_connection_term(b, n))
        if acc != want:
            failures.append(f"sum on {blade_label(b)} = {acc}, expected {want}")
        if len(b) % 2 == 1:
            k = len(b) - (1 if 0 in b else 0)
            if acc != x.scale(-n_operator(k, m)):
                failures.append(f"odd {blade_label(b)}: not -N with N={n_operator(k, m)}")
    return _check("connection_correction_is_minus_N", failures)


def verify_clifford(n: int, seed: int = 0) -> IdentityReport:
    """Run every algebraic identity for odd dimension ``n``."""
    _require_odd(n)
    checks = [
        check_volume_element(n),
        check_star_tau(n),
        check_symbol_square(n),
        check_anticommutation(n, seed=seed),
        check_chirality(n),
        check_boundary_action(n),
        verify_connection_correction(n),
    ]
    return IdentityReport(n, checks)


__all__ = [
    "IdentityCheck",
    "IdentityReport",
    "check_anticommutation",
    "check_boundary_action",
    "check_chirality",
    "check_star_tau",
    "check_symbol_square",
    "check_volume_element",
    "expected_connection_term",
    "factorization_action",
    "standard_boundary_action",
    "verify_clifford",
    "verify_connection_correction",
]
