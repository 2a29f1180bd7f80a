"""Deciding local L2-ness and canonical-lattice membership of Laurent sections.

Near a generic point of the divisor s_j = 0, a component of W(N_j)-degree l
whose coefficient starts at s_j^n has squared norm comparable to
|s_j|^{2n} (-log|s_j|)^l, so integrability reduces to the radial integral

    int_0^1 r^{2n+1} (-log r)^l dr.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cyclotomic import lcm
from .exactlin import ExactMatrix
from .lattice import CanonicalFrame, base_change_pullback, cover_exponent
from .laurent import LaurentSection
from .weight import MultiGrading, multi_grading

__all__ = [
    "Certificate",
    "DecisionReport",
    "ImplicationResult",
    "Reduction",
    "laurent_integrability",
    "decide",
    "reduce_quasi_unipotent",
    "check_implication",
]


def laurent_integrability(k: int, i) -> tuple[bool, bool]:
    """(convergent, boundary) for int_0^1 r^{2i+1} (-log r)^k dr.

    Near r = 0 the substitution u = -log r turns the integrand into
    e^{-(2i+2)u} u^k, so the integral converges iff i > -1, or i = -1 and
    k <= -2.  The second case is flagged: there the simpler criterion
    "i >= 0" and the literal integral disagree.
    """
    i = Fraction(i)
    boundary = i == -1 and k <= -2
    return (i > -1 or boundary), boundary


@dataclass(frozen=True)
class Certificate:
    """One (alpha, j) entry; alpha indexes the W(N_j)-homogeneous basis."""

    alpha: int
    j: int
    degree: int
    exponent: int
    convergent: bool
    boundary: bool

    def as_dict(self, one_based: bool = True) -> dict:
        off = 1 if one_based else 0
        return {
            "alpha": self.alpha + off,
            "j": self.j + off,
            "l": self.degree,
            "n": self.exponent,
            "convergent": self.convergent,
            "boundary": self.boundary,
        }


@dataclass
class DecisionReport:
    certificates: list[Certificate]
    lattice_exponents: dict[tuple[int, int], int]  # (alpha, j) -> lowest exponent in the canonical frame
    is_L2: bool
    in_lattice: bool
    boundary: bool
    implication: "ImplicationResult | None" = None

    @property
    def in_lowest_piece(self) -> bool:
        # for sections of F^q V the lowest Hodge-module piece is F^q V ∩ lattice
        return self.in_lattice

    def failing(self) -> list[Certificate]:
        return [c for c in self.certificates if not c.convergent]


@dataclass(frozen=True)
class ImplicationResult:
    passed: bool
    excluded: bool  # boundary-flagged reports are not judged
    counterexample: DecisionReport | None = None


def check_implication(report: DecisionReport) -> ImplicationResult:
    """L2 without boundary cells must imply lattice membership."""
    if report.boundary:
        return ImplicationResult(True, True)
    ok = (not report.is_L2) or report.in_lattice
    return ImplicationResult(ok, False, None if ok else report)


def _homogeneous_change(frame: CanonicalFrame, grading: MultiGrading) -> tuple[ExactMatrix, list[int]]:
    """C with g = C h, where frame basis = U C and U is the homogeneous basis."""
    u, degs = grading.basis()
    order = lcm(u.order, frame.basis.order)
    change = u.lift(order).solve(frame.basis.lift(order))
    return change, [d[0] for d in degs]


def decide(
    section: LaurentSection,
    frame: CanonicalFrame,
    gradings: Sequence[MultiGrading] | None = None,
    Q: ExactMatrix | None = None,
    center: int = 0,
) -> DecisionReport:
    """Certificates for each divisor branch, and the two global verdicts.

    The tuple must be unipotent; quasi-unipotent data goes through
    ``reduce_quasi_unipotent`` first.  ``gradings[j]`` may supply the
    one-variable splitting of W(N_j); by default it is built with Q.
    """
    if section.frame is not frame:
        raise ValueError("section is expressed in a different frame")
    if not frame.is_unipotent():
        raise ValueError("monodromy is not unipotent; reduce the section to the unipotent cover first")
    n = frame.n
    lattice = {}
    for a in section.coeffs:
        for j in range(n):
            lattice[(a, j)] = section.lowest_exponent(a, j)
    in_lattice = all(e >= 0 for e in lattice.values())
    certs = []
    for j, nil in enumerate(frame.logs.N):
        grading = gradings[j] if gradings is not None else multi_grading([nil], Q, center)
        change, degs = _homogeneous_change(frame, grading)
        if section.symbolic_tail:
            lows = section.generic_lowest(change, j)
        else:
            comps = section.in_basis(change)
            lows = {b: min(e[j] for e in poly) for b, poly in comps.items()}
        for b in sorted(lows):
            conv, bd = laurent_integrability(degs[b], lows[b])
            certs.append(Certificate(b, j, degs[b], lows[b], conv, bd))
    report = DecisionReport(
        certificates=certs,
        lattice_exponents=lattice,
        is_L2=all(c.convergent for c in certs),
        in_lattice=in_lattice,
        boundary=any(c.boundary for c in certs),
    )
    report.implication = check_implication(report)
    return report


@dataclass
class Reduction:
    """A section on the unipotent cover plus the exponent bookkeeping."""

    section: LaurentSection
    frame: CanonicalFrame
    # (alpha, j) -> (n, m, k, cover exponent m n + m - 1 - k)
    exponents: dict[tuple[int, int], tuple[int, int, int, int]] = field(default_factory=dict)

    def equivalence_holds(self) -> bool:
        """m n + m - 1 - k >= 0 exactly when n >= 0, for every recorded cell."""
        return all((c >= 0) == (n >= 0) for n, _, _, c in self.exponents.values())

    def original_in_lattice(self) -> bool:
        return all(n >= 0 for n, _, _, _ in self.exponents.values())


def reduce_quasi_unipotent(section: LaurentSection, frame: CanonicalFrame) -> Reduction:
    """Pull a section back to the cover, including the Jacobian monomials."""
    if section.frame is not frame:
        raise ValueError("section is expressed in a different frame")
    cover = base_change_pullback(frame, section, jacobian=True)
    ks = frame.exponents
    exps = {}
    for a in section.coeffs:
        for j, m in enumerate(frame.indices):
            n = section.lowest_exponent(a, j)
            c = cover_exponent(m, ks[a][j], n)
            if c != cover.lowest_exponent(a, j):
                raise AssertionError("pullback exponent disagrees with the closed form")
            exps[(a, j)] = (n, m, ks[a][j], c)
    return Reduction(section=cover, frame=cover.frame, exponents=exps)
