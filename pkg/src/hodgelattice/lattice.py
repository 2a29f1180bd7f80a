"""Canonical-lattice frames w_alpha(z) = exp(sum z_j R_j) v_alpha.

Also: exact residue eigenvalues and the bookkeeping for pulling a section
back along the cover (s~_1, ..., s~_n) -> (s~_1^m_1, ..., s~_n^m_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial

import numpy as np

from .cyclotomic import CycScalar, lcm
from .exactlin import ExactMatrix, charpoly, column_basis
from .laurent import LaurentSection
from .monodromy import LogDecomposition, log_decomposition, validate_tuple

__all__ = [
    "FrameNotAdaptedError",
    "CanonicalFrame",
    "ResidueReport",
    "canonical_frame",
    "eigen_adapted_basis",
    "residues",
    "evaluate_frame",
    "cover_frame",
    "base_change_pullback",
    "cover_exponent",
]

# exp overflows past ~709; keep a margin for the matrix products
_MAX_EXPONENT = 600.0


class FrameNotAdaptedError(ValueError):
    pass


@dataclass(frozen=True)
class CanonicalFrame:
    logs: LogDecomposition
    basis: ExactMatrix

    @property
    def n(self) -> int:
        return len(self.logs.logs)

    @property
    def rank(self) -> int:
        return self.basis.rows

    @property
    def tuple(self):
        return self.logs.tuple

    @property
    def indices(self) -> tuple[int, ...]:
        return self.logs.tuple.indices

    def is_unipotent(self) -> bool:
        return self.logs.tuple.is_unipotent()

    @cached_property
    def _numeric(self):
        blocks = []
        for lg in self.logs.logs:
            ks = np.array([b.k / b.m for b in lg.table])
            projs = np.array([b.projector.to_numpy() for b in lg.table])
            blocks.append((ks, projs))
        nils = np.array([lg.N.to_numpy() for lg in self.logs.logs])
        return blocks, nils, self.basis.to_numpy()

    @cached_property
    def exponents(self) -> tuple[tuple[int, ...], ...] | None:
        """k_{alpha j} per basis vector, or None when the basis is not eigen-adapted."""
        rows = []
        for a in range(self.rank):
            v = self.basis.column(a)
            ks = []
            for lg in self.logs.logs:
                k = None
                for b in lg.table:
                    if b.projector @ v == v:
                        k = b.k
                        break
                if k is None:
                    return None
                ks.append(k)
            rows.append(tuple(ks))
        return tuple(rows)

    def is_adapted(self) -> bool:
        return self.exponents is not None

    def evaluate(self, z) -> np.ndarray:
        return evaluate_frame(self, z)

    def evaluate_many(self, z: np.ndarray) -> np.ndarray:
        """Frame matrices for points z of shape (K, n); returns (K, r, r)."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        if z.shape[1] != self.n:
            raise ValueError(f"points must have {self.n} coordinates")
        blocks, nils, basis = self._numeric
        r = self.rank
        growth = np.abs(z.imag).max(initial=0.0) * 2 * np.pi
        if growth > _MAX_EXPONENT:
            raise OverflowError(f"|Im z| = {growth / (2 * np.pi):.3g} overflows the frame evaluation")
        out = np.broadcast_to(np.eye(r, dtype=complex), (z.shape[0], r, r)).copy()
        for j, (ks, projs) in enumerate(blocks):
            # exp(2 pi i z_j A_j) = sum_b exp(-2 pi i z_j k_b / m_j) P_b
            phases = np.exp(-2j * np.pi * np.outer(z[:, j], ks))
            semi = np.einsum("kb,bij->kij", phases, projs)
            out = semi @ out
        x = np.einsum("kj,jab->kab", z, nils)
        expo = np.broadcast_to(np.eye(r, dtype=complex), x.shape).copy()
        power = expo.copy()
        for k in range(1, r + 1):
            power = power @ x
            expo = expo + power / factorial(k)
        return out @ expo @ basis


def eigen_adapted_basis(logs: LogDecomposition) -> ExactMatrix:
    """Simultaneous eigenvectors of all (T_j)_s, from images of joint projectors."""
    r = logs.tuple.rank
    order = logs.order
    cols = []
    for combo in product(*[lg.table for lg in logs.logs]):
        p = ExactMatrix.identity(r, order)
        for b in combo:
            p = p @ b.projector
        if not p.is_zero():
            cols.extend(column_basis(p).columns())
    basis = ExactMatrix.from_columns(cols, nrows=r, order=order)
    if basis.cols != r or basis.rank() != r:
        raise ValueError("joint eigenspaces do not span V")
    return basis


def canonical_frame(logs: LogDecomposition, basis: ExactMatrix | str = "standard") -> CanonicalFrame:
    r = logs.tuple.rank
    if isinstance(basis, str):
        if basis == "standard":
            basis = ExactMatrix.identity(r, logs.order)
        elif basis == "adapted":
            basis = eigen_adapted_basis(logs)
        else:
            raise ValueError(f"unknown basis choice {basis!r}")
    if basis.shape != (r, r) or basis.rank() != r:
        raise ValueError("frame basis must be an invertible r x r matrix")
    return CanonicalFrame(logs=logs, basis=basis.lift(lcm(basis.order, logs.order)))


def evaluate_frame(frame: CanonicalFrame, z) -> np.ndarray:
    """Columns w_alpha(z) at a single point z in H^n."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z.imag <= 0):
        raise ValueError("frame evaluation needs Im z_j > 0")
    return frame.evaluate_many(z[None, :])[0]


@dataclass(frozen=True)
class ResidueData:
    A: ExactMatrix
    N: ExactMatrix
    eigenvalues: tuple[tuple[Fraction, int], ...]  # (value, multiplicity)
    contained: bool
    charpoly_verified: bool
    commutes: bool


@dataclass(frozen=True)
class ResidueReport:
    per_divisor: tuple[ResidueData, ...]

    @property
    def contained(self) -> bool:
        return all(d.contained and d.charpoly_verified for d in self.per_divisor)

    def eigenvalue_sets(self) -> list[list[Fraction]]:
        return [[e for e, _ in d.eigenvalues] for d in self.per_divisor]


def residues(logs: LogDecomposition) -> ResidueReport:
    """Residue eigenvalues -k/m per divisor, re-verified from the characteristic polynomial of A_j."""
    out = []
    for lg in logs.logs:
        mult: dict[Fraction, int] = {}
        for b in lg.table:
            mult[b.exponent] = mult.get(b.exponent, 0) + b.dim
        # independent check: charpoly(A) == prod (x - e)^mult
        target = [CycScalar.one(lg.A.order)]
        for e, d in mult.items():
            for _ in range(d):
                root = CycScalar.rational(e, lg.A.order)
                target = _mul_linear(target, root)
        verified = _poly_equal(charpoly(lg.A), target)
        eig = tuple(sorted(mult.items(), reverse=True))
        contained = all(-1 < e <= 0 for e, _ in eig)
        out.append(
            ResidueData(
                A=lg.A,
                N=lg.N,
                eigenvalues=eig,
                contained=contained,
                charpoly_verified=verified,
                commutes=lg.A.commutes_with(lg.N),
            )
        )
    return ResidueReport(tuple(out))


def _mul_linear(p: list[CycScalar], root: CycScalar) -> list[CycScalar]:
    # p(x) * (x - root)
    out = [CycScalar.zero(root.order)] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] = out[i + 1] + c
        out[i] = out[i] - c * root
    return out


def _poly_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(x == y for x, y in zip(a, b))


def cover_exponent(m: int, k: int, n: int) -> int:
    """Lowest cover exponent m*n + m - 1 - k of the Jacobian-twisted pullback."""
    return m * n + m - 1 - k


def cover_frame(frame: CanonicalFrame) -> CanonicalFrame:
    """Canonical frame of the unipotent cover: T~_j = (T_j)_u^m_j, R~_j = m_j N_j."""
    tup = frame.tuple
    cover = validate_tuple([tu ** m for tu, m in zip(tup.unipotent, tup.indices)])
    logs = log_decomposition(cover)
    for lg, orig, m in zip(logs.logs, frame.logs.logs, tup.indices):
        if lg.N != orig.N.scale(m):
            raise AssertionError("cover logarithm differs from m_j N_j")
    return CanonicalFrame(logs=logs, basis=frame.basis)


def base_change_pullback(frame: CanonicalFrame, section: LaurentSection, jacobian: bool = False) -> LaurentSection:
    """Re-express the pullback of a section in the cover's canonical frame.

    w_alpha pulls back to prod_j s~_j^{-k_{alpha j}} w~_alpha and h_alpha(s)
    to h_alpha(s~^m).  With ``jacobian`` the section is also multiplied by
    prod_j m_j s~_j^{m_j - 1}, which is what transports the L2 integral.
    """
    if section.frame is not frame:
        raise ValueError("section is expressed in a different frame")
    ks = frame.exponents
    if ks is None:
        raise FrameNotAdaptedError("frame not adapted")
    ms = frame.indices
    cover = cover_frame(frame)
    jac_const = 1
    for m in ms:
        jac_const *= m
    coeffs = {}
    for a, poly in section.coeffs.items():
        new = {}
        for exps, c in poly.items():
            e = [m * n - k for m, n, k in zip(ms, exps, ks[a])]
            if jacobian:
                e = [x + m - 1 for x, m in zip(e, ms)]
                c = c * jac_const
            new[tuple(e)] = c
        coeffs[a] = new
    return LaurentSection(cover, coeffs, symbolic_tail=section.symbolic_tail)
