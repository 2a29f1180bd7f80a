"""Finite Laurent polynomials in s_1..s_n and sections written in a frame."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import numpy as np

from .cyclotomic import CycScalar, lcm
from .exactlin import ExactMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .lattice import CanonicalFrame

__all__ = ["LaurentPoly", "LaurentSection", "poly_from_terms"]

# exponent tuple -> exact coefficient; zero coefficients are never stored
LaurentPoly = dict


def poly_from_terms(terms: Mapping[tuple[int, ...], object]) -> LaurentPoly:
    out: LaurentPoly = {}
    for exps, c in terms.items():
        c = c if isinstance(c, CycScalar) else CycScalar.rational(c)
        key = tuple(int(e) for e in exps)
        total = out.get(key)
        total = c if total is None else total + c
        if total.is_zero():
            out.pop(key, None)
        else:
            out[key] = total
    return out


def _add_into(acc: LaurentPoly, poly: LaurentPoly, scale: CycScalar) -> None:
    if scale.is_zero():
        return
    for exps, c in poly.items():
        v = acc.get(exps)
        v = scale * c if v is None else v + scale * c
        if v.is_zero():
            acc.pop(exps, None)
        else:
            acc[exps] = v


def lowest_exponent(poly: LaurentPoly, j: int) -> int | None:
    if not poly:
        return None
    return min(e[j] for e in poly)


@dataclass(frozen=True)
class LaurentSection:
    """sigma = sum_alpha h_alpha w_alpha with h_alpha finite Laurent polynomials.

    ``coeffs`` maps a 0-based frame index alpha to {exponent tuple: coefficient}.
    With ``symbolic_tail`` set, each h_alpha is read as its leading monomials
    plus unspecified higher-order terms; only lowest exponents are then used,
    and no cancellation between different alpha is assumed.
    """

    frame: "CanonicalFrame"
    coeffs: Mapping[int, LaurentPoly] = field(default_factory=dict)
    symbolic_tail: bool = False

    def __post_init__(self):
        clean = {}
        n = self.frame.n
        for a, poly in self.coeffs.items():
            if not 0 <= a < self.frame.rank:
                raise ValueError(f"frame index {a} out of range")
            poly = poly_from_terms(poly)
            for exps in poly:
                if len(exps) != n:
                    raise ValueError(f"exponent vector {exps} does not have {n} entries")
            if poly:
                clean[a] = poly
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, frame, alpha: int, exponents, coeff=1) -> "LaurentSection":
        return cls(frame, {alpha: {tuple(exponents): coeff}})

    @property
    def n(self) -> int:
        return self.frame.n

    def is_zero(self) -> bool:
        return not self.coeffs

    def lowest_exponent(self, alpha: int, j: int) -> int | None:
        return lowest_exponent(self.coeffs.get(alpha, {}), j)

    def order(self) -> int:
        return lcm(1, *(c.order for p in self.coeffs.values() for c in p.values()))

    def in_basis(self, change: ExactMatrix) -> dict[int, LaurentPoly]:
        """Coefficients g_beta = sum_alpha change[beta, alpha] h_alpha."""
        out: dict[int, LaurentPoly] = {}
        for b in range(change.rows):
            acc: LaurentPoly = {}
            for a, poly in self.coeffs.items():
                _add_into(acc, poly, change[b, a])
            if acc:
                out[b] = acc
        return out

    def generic_lowest(self, change: ExactMatrix, j: int) -> dict[int, int]:
        """Lowest s_j exponents after a basis change, assuming no cancellation."""
        out = {}
        for b in range(change.rows):
            exps = [self.lowest_exponent(a, j) for a in self.coeffs if not change[b, a].is_zero()]
            if exps:
                out[b] = min(exps)
        return out

    def coefficient_values(self, s: np.ndarray) -> np.ndarray:
        """Numerical h_alpha(s) for points s of shape (N, n); returns (N, rank)."""
        s = np.atleast_2d(np.asarray(s, dtype=complex))
        out = np.zeros((s.shape[0], self.frame.rank), dtype=complex)
        for a, poly in self.coeffs.items():
            for exps, c in poly.items():
                term = np.full(s.shape[0], complex(c))
                for j, e in enumerate(exps):
                    if e:
                        term = term * s[:, j] ** e
                out[:, a] += term
        return out

    def values(self, z: np.ndarray) -> np.ndarray:
        """sigma(z) as vectors in flat coordinates, z of shape (N, n)."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        s = np.exp(2j * np.pi * z)
        h = self.coefficient_values(s)
        frames = self.frame.evaluate_many(z)
        return np.einsum("kia,ka->ki", frames, h)
