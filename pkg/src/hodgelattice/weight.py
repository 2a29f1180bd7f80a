"""Monodromy weight filtrations and the iterated multigrading.

For nilpotent N the weight filtration centred at c is

    W_{c+l} = sum_{j >= max(0, -l)} ker N^{l+j+1} ∩ im N^j,

which on a single Jordan string e_1 <- e_2 <- ... <- e_d puts e_i in
degree 2i - d - 1.  Outputs are re-checked against the defining axioms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .cyclotomic import lcm
from .exactlin import ExactMatrix, canonical_basis, column_basis, contains, intersect, kernel_basis, span_sum

__all__ = [
    "WeightFiltration",
    "MultiGrading",
    "weight_filtration",
    "check_axioms",
    "multi_grading",
    "orthogonal_complement",
    "same_filtration",
]

def _empty(r: int, order: int) -> ExactMatrix:
    return ExactMatrix.zeros(r, 0, order)


@dataclass(frozen=True)
class WeightFiltration:
    """Increasing filtration; ``steps[l]`` is a basis of W_l for lo <= l <= hi."""

    N: ExactMatrix
    center: int
    steps: dict[int, ExactMatrix]

    @property
    def rank(self) -> int:
        return self.N.rows

    @property
    def lo(self) -> int:
        return min(self.steps)

    @property
    def hi(self) -> int:
        return max(self.steps)

    def __getitem__(self, l: int) -> ExactMatrix:
        if l < self.lo:
            return _empty(self.rank, self.N.order)
        if l > self.hi:
            return self.steps[self.hi]
        return self.steps[l]

    def dim(self, l: int) -> int:
        return self[l].cols

    def graded_dims(self) -> dict[int, int]:
        out = {}
        for l in range(self.lo, self.hi + 1):
            d = self.dim(l) - self.dim(l - 1)
            if d:
                out[l] = d
        return out


def _is_nilpotent(n: ExactMatrix) -> bool:
    return (n ** n.rows).is_zero()


def weight_filtration(nil: ExactMatrix, center: int = 0) -> WeightFiltration:
    if not nil.is_square():
        raise ValueError("weight filtration of a non-square matrix")
    if not _is_nilpotent(nil):
        raise ValueError("matrix is not nilpotent")
    r, order = nil.rows, nil.order
    ident = ExactMatrix.identity(r, order)
    powers = [ident]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ nil)
    k = len(powers) - 2  # N^(k+1) = 0, N^k != 0 (k = -1 for r = 0)
    k = max(k, 0)

    def pw(e: int) -> ExactMatrix:
        return powers[e] if e < len(powers) else powers[-1]

    kers = {}
    ims = {}

    def ker(e: int) -> ExactMatrix:
        if e not in kers:
            kers[e] = ExactMatrix.from_columns(kernel_basis(pw(e)), nrows=r, order=order)
        return kers[e]

    def im(e: int) -> ExactMatrix:
        if e not in ims:
            ims[e] = column_basis(pw(e))
        return ims[e]

    steps = {}
    for l in range(-k - 1, k + 1):
        parts = [intersect(ker(l + j + 1), im(j)) for j in range(max(0, -l), k + 1)]
        parts = [p for p in parts if p.cols]
        steps[center + l] = canonical_basis(span_sum(*parts)) if parts else _empty(r, order)
    return WeightFiltration(N=nil, center=center, steps=steps)


def _complement_basis(sub: ExactMatrix, sup: ExactMatrix) -> ExactMatrix:
    """Columns of sup extending a basis of sub to a basis of sup."""
    cur, rank, picked = sub, sub.cols, []
    for v in sup.columns():
        trial = cur.hstack(ExactMatrix.from_columns([v], order=sup.order))
        if trial.rank() > rank:
            cur, rank = trial, rank + 1
            picked.append(v)
    return ExactMatrix.from_columns(picked, nrows=sup.rows, order=sup.order)


def check_axioms(w: WeightFiltration) -> dict[str, bool]:
    """Exact check of N W_l ⊆ W_{l-2} and N^l: Gr_{c+l} ≅ Gr_{c-l}."""
    nil, c = w.N, w.center
    shift_ok = all(contains(w[l - 2], nil @ w[l]) for l in range(w.lo, w.hi + 1) if w[l].cols)
    increasing = all(contains(w[l], w[l - 1]) for l in range(w.lo, w.hi + 2))
    exhaustive = w[w.hi].cols == w.rank and w[w.lo - 1].cols == 0
    iso_ok = True
    for l in range(0, w.hi - c + 1):
        up = _complement_basis(w[c + l - 1], w[c + l])
        low = w[c - l - 1]
        dim_low = w.dim(c - l) - w.dim(c - l - 1)
        if up.cols != dim_low:
            iso_ok = False
            break
        if up.cols == 0:
            continue
        img = (nil ** l) @ up
        if not contains(w[c - l], img):
            iso_ok = False
            break
        stacked = low.hstack(img) if low.cols else img
        if stacked.rank() != low.cols + up.cols:
            iso_ok = False
            break
    return {"increasing": increasing, "exhaustive": exhaustive, "shift": shift_ok, "isomorphism": iso_ok}


def same_filtration(a: WeightFiltration, b: WeightFiltration) -> bool:
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    for l in range(lo - 1, hi + 1):
        x, y = a[l], b[l]
        if x.cols != y.cols or not contains(x, y) or not contains(y, x):
            return False
    return True


def orthogonal_complement(sub: ExactMatrix, sup: ExactMatrix, q: ExactMatrix) -> ExactMatrix:
    """Basis of {x in sup : u^* Q x = 0 for all u in sub}."""
    if sub.cols == 0:
        return sup
    if sup.cols == 0:
        return sup
    order = lcm(sub.order, sup.order, q.order)
    sub, sup, q = sub.lift(order), sup.lift(order), q.lift(order)
    # coefficients c with sub^* Q sup c = 0
    gram = sub.H @ q @ sup
    ker = kernel_basis(gram)
    if not ker:
        return ExactMatrix.zeros(sup.rows, 0, order)
    return ExactMatrix.from_columns([sup @ c for c in ker], order=order)


@dataclass(frozen=True)
class MultiGrading:
    """V = ⊕_l V_l with l in Z^n; pieces[l] is a basis of V_l."""

    filtrations: tuple[WeightFiltration, ...]
    Q: ExactMatrix
    pieces: dict[tuple[int, ...], ExactMatrix]

    @property
    def n(self) -> int:
        return len(self.filtrations)

    @property
    def rank(self) -> int:
        return self.Q.rows

    @property
    def index_set(self) -> list[tuple[int, ...]]:
        return sorted(self.pieces)

    def dims(self) -> dict[tuple[int, ...], int]:
        return {l: p.cols for l, p in sorted(self.pieces.items())}

    def basis(self) -> tuple[ExactMatrix, list[tuple[int, ...]]]:
        """All piece bases side by side, with the multidegree of each column."""
        cols, degs = [], []
        for l in self.index_set:
            for c in self.pieces[l].columns():
                cols.append(c)
                degs.append(l)
        return ExactMatrix.from_columns(cols, nrows=self.rank, order=self.Q.order), degs

    def Q_piece(self, l: tuple[int, ...]) -> ExactMatrix:
        p = self.pieces[l]
        return p.H @ self.Q.lift(lcm(self.Q.order, p.order)) @ p

    def verify(self) -> bool:
        """Pieces span V, and the j-th partial sums reproduce W^(j)."""
        basis, degs = self.basis()
        if basis.cols != self.rank or basis.rank() != self.rank:
            return False
        for j, w in enumerate(self.filtrations):
            for m in range(w.lo - 1, w.hi + 1):
                cols = [c for c, d in zip(basis.columns(), degs) if d[j] <= m]
                part = ExactMatrix.from_columns(cols, nrows=self.rank, order=basis.order)
                target = w[m]
                if part.cols != target.cols or not contains(target, part):
                    return False
        return True

    @property
    def numeric(self):
        """(basis^-1, degrees, per-column Q blocks) for fast numerical projection."""
        basis, degs = self.basis()
        b = basis.to_numpy()
        inv = np.linalg.inv(b)
        q = self.Q.to_numpy()
        return b, inv, degs, q


def multi_grading(nilpotents: Sequence[ExactMatrix], Q: ExactMatrix | None = None, center: int = 0) -> MultiGrading:
    """Common Q-orthogonal splitting of W(N_1), W(N_1+N_2), ..., W(N_1+...+N_n)."""
    if not nilpotents:
        raise ValueError("need at least one nilpotent operator")
    r = nilpotents[0].rows
    order = lcm(*(n.order for n in nilpotents), Q.order if Q is not None else 1)
    nils = [n.lift(order) for n in nilpotents]
    for i in range(len(nils)):
        for j in range(i + 1, len(nils)):
            if not nils[i].commutes_with(nils[j]):
                raise ValueError(f"non-commuting nilpotents ({i + 1},{j + 1})")
    if Q is None:
        Q = ExactMatrix.identity(r, order)
    Q = Q.lift(order)
    if Q.H != Q:
        raise ValueError("Q is not Hermitian")
    if np.linalg.eigvalsh(Q.to_numpy()).min() <= 0:
        raise ValueError("Q is not positive definite")
    filts = []
    acc = ExactMatrix.zeros(r, r, order)
    for n in nils:
        acc = acc + n
        filts.append(weight_filtration(acc, center))
    ranges = [range(w.lo, w.hi + 1) for w in filts]
    pieces = {}
    for l in product(*ranges):
        inter = None
        for w, lj in zip(filts, l):
            inter = w[lj] if inter is None else intersect(inter, w[lj])
            if inter.cols == 0:
                break
        if inter is None or inter.cols == 0:
            continue
        lower = []
        for j in range(len(filts)):
            sub = None
            for i, (w, li) in enumerate(zip(filts, l)):
                s = w[li - 1] if i == j else w[li]
                sub = s if sub is None else intersect(sub, s)
                if sub.cols == 0:
                    break
            if sub.cols:
                lower.append(sub)
        lower_span = span_sum(*lower) if lower else _empty(r, order)
        piece = orthogonal_complement(lower_span, inter, Q)
        if piece.cols:
            pieces[l] = canonical_basis(piece)
    grading = MultiGrading(filtrations=tuple(filts), Q=Q, pieces=pieces)
    if not grading.verify():
        raise ValueError("weight filtrations admit no common splitting")
    return grading
