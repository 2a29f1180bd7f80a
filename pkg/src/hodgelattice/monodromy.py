"""Quasi-unipotent monodromy tuples and their logarithms.

The logarithm of T = T_s T_u is R = 2*pi*i*A + N where A acts by -k/m on
the eigenspace where T_s acts by exp(-2*pi*i*k/m), 0 <= k <= m-1, and
N = log T_u is the (finite) Mercator series.  The factor 2*pi*i is never
materialised, so A and N stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .cyclotomic import CycScalar, lcm
from .exactlin import (
    ExactMatrix,
    NotInvertibleError,
    eigen_projectors,
    jordan_chevalley,
    minimal_polynomial_semisimple,
    poly_eval,
    roots_of_unity_orders,
)

__all__ = [
    "MonodromyError",
    "EigenBlock",
    "MonodromyLog",
    "MonodromyTuple",
    "LogDecomposition",
    "validate_tuple",
    "log_unipotent",
    "exp_nilpotent",
    "log_monodromy",
    "log_decomposition",
]


class MonodromyError(ValueError):
    pass


@dataclass(frozen=True)
class EigenBlock:
    """One eigenspace of T_s: eigenvalue exp(-2*pi*i*k/m) and its projector."""

    eigenvalue: CycScalar
    k: int
    m: int
    projector: ExactMatrix
    dim: int

    @property
    def exponent(self) -> Fraction:
        """Eigenvalue -k/m of A (and of the residue) on this block."""
        return Fraction(-self.k, self.m)


@dataclass(frozen=True)
class MonodromyLog:
    A: ExactMatrix
    N: ExactMatrix
    table: tuple[EigenBlock, ...]
    m: int

    def __iter__(self):
        # allows ``A, N, table = log_monodromy(T)``
        return iter((self.A, self.N, self.table))

    @property
    def semisimple(self) -> ExactMatrix:
        """T_s rebuilt from the table as sum of zeta^-k P."""
        n = self.A.rows
        out = ExactMatrix.zeros(n, n, self.A.order)
        for b in self.table:
            out = out + b.projector.scale(b.eigenvalue)
        return out

    def reconstruct(self) -> ExactMatrix:
        return self.semisimple @ exp_nilpotent(self.N)


@dataclass(frozen=True)
class MonodromyTuple:
    rank: int
    matrices: tuple[ExactMatrix, ...]
    indices: tuple[int, ...]
    semisimple: tuple[ExactMatrix, ...]
    unipotent: tuple[ExactMatrix, ...]
    order: int

    @property
    def n(self) -> int:
        return len(self.matrices)

    def is_unipotent(self) -> bool:
        return all(m == 1 for m in self.indices)


@dataclass(frozen=True)
class LogDecomposition:
    tuple: MonodromyTuple
    logs: tuple[MonodromyLog, ...]

    @property
    def A(self) -> list[ExactMatrix]:
        return [lg.A for lg in self.logs]

    @property
    def N(self) -> list[ExactMatrix]:
        return [lg.N for lg in self.logs]

    @property
    def order(self) -> int:
        return self.tuple.order


def validate_tuple(matrices: Sequence[ExactMatrix]) -> MonodromyTuple:
    """Check commutativity and quasi-unipotency; compute the indices m_j."""
    if not matrices:
        raise MonodromyError("empty monodromy tuple")
    r = matrices[0].rows
    for i, t in enumerate(matrices):
        if not t.is_square() or t.rows != r:
            raise MonodromyError(f"matrix {i + 1} is not square of size {r}")
    order = lcm(*(t.order for t in matrices))
    mats = [t.lift(order) for t in matrices]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not mats[i].commutes_with(mats[j]):
                raise MonodromyError(f"non-commuting pair ({i + 1},{j + 1})")
    semis, unis, indices = [], [], []
    for i, t in enumerate(mats):
        try:
            ts, tu = jordan_chevalley(t)
        except NotInvertibleError:
            raise MonodromyError(f"matrix {i + 1} is not invertible") from None
        orders = roots_of_unity_orders(minimal_polynomial_semisimple(ts))
        if orders is None:
            raise MonodromyError("not quasi-unipotent: eigenvalue of T_s is not a root of unity")
        semis.append(ts)
        unis.append(tu)
        indices.append(lcm(*orders))
    big = lcm(order, *indices)
    return MonodromyTuple(
        rank=r,
        matrices=tuple(t.lift(big) for t in mats),
        indices=tuple(indices),
        semisimple=tuple(t.lift(big) for t in semis),
        unipotent=tuple(t.lift(big) for t in unis),
        order=big,
    )


def _nilpotent(e: ExactMatrix) -> bool:
    return (e ** e.rows).is_zero()


def log_unipotent(tu: ExactMatrix) -> ExactMatrix:
    """N = -sum_{k>=1} (Id - T_u)^k / k, truncated where the powers vanish."""
    n = tu.rows
    ident = ExactMatrix.identity(n, tu.order)
    e = ident - tu
    if not _nilpotent(e):
        raise MonodromyError("matrix is not unipotent")
    out = ExactMatrix.zeros(n, n, tu.order)
    power = e
    k = 1
    while not power.is_zero():
        out = out - power.scale(Fraction(1, k))
        power = power @ e
        k += 1
    return out


def exp_nilpotent(nil: ExactMatrix) -> ExactMatrix:
    """Finite exponential series of a nilpotent matrix."""
    n = nil.rows
    out = ExactMatrix.identity(n, nil.order)
    power = out
    k = 1
    while True:
        power = power @ nil
        if power.is_zero():
            return out
        out = out + power.scale(Fraction(1, factorial(k)))
        k += 1
        if k > n + 1:
            raise MonodromyError("matrix is not nilpotent")


def _log_from_parts(ts: ExactMatrix, tu: ExactMatrix, m: int) -> MonodromyLog:
    order = lcm(ts.order, m)
    ts = ts.lift(order)
    q = minimal_polynomial_semisimple(ts)
    eigen = []
    for a in range(m):
        lam = CycScalar.root_of_unity(m, a, order)
        if poly_eval(q, lam).is_zero():
            eigen.append((lam, (-a) % m))
    if len(eigen) != len(q) - 1:
        raise MonodromyError("not quasi-unipotent: eigenvalue of T_s is not a root of unity")
    projs = eigen_projectors(ts, [lam for lam, _ in eigen])
    n = ts.rows
    a_mat = ExactMatrix.zeros(n, n, order)
    table = []
    for (lam, k), (_, p) in zip(eigen, projs):
        a_mat = a_mat + p.scale(Fraction(-k, m))
        table.append(EigenBlock(eigenvalue=lam, k=k, m=m, projector=p, dim=p.rank()))
    table.sort(key=lambda b: b.k)
    return MonodromyLog(A=a_mat, N=log_unipotent(tu.lift(order)), table=tuple(table), m=m)


def log_monodromy(t: ExactMatrix) -> MonodromyLog:
    """Logarithm of a single quasi-unipotent operator."""
    tup = validate_tuple([t])
    return _log_from_parts(tup.semisimple[0], tup.unipotent[0], tup.indices[0])


def log_decomposition(tup: MonodromyTuple) -> LogDecomposition:
    logs = tuple(
        _log_from_parts(ts, tu, m) for ts, tu, m in zip(tup.semisimple, tup.unipotent, tup.indices)
    )
    return LogDecomposition(tuple=tup, logs=logs)
