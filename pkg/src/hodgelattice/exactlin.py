"""Exact matrices over Q(zeta_M) and the linear algebra built on them.

Everything here is exact: kernels, images, inverses, characteristic and
minimal polynomials, the Jordan-Chevalley decomposition and spectral
projectors.  Matrices may have zero columns, which is how the empty
subspace is represented.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CycScalar, cyclotomic_poly, lcm, totient

__all__ = [
    "ExactMatrix",
    "as_scalar",
    "charpoly",
    "squarefree_part",
    "minimal_polynomial_semisimple",
    "jordan_chevalley",
    "eigen_projectors",
    "kernel_basis",
    "column_basis",
    "canonical_basis",
    "intersect",
    "span_sum",
    "contains",
    "poly_gcd",
    "poly_divmod",
    "poly_eval",
    "poly_eval_matrix",
    "roots_of_unity_orders",
    "NotInvertibleError",
]


class NotInvertibleError(ValueError):
    pass


def as_scalar(x, order: int = 1) -> CycScalar:
    if isinstance(x, CycScalar):
        return x.lift(lcm(order, x.order))
    return CycScalar.rational(x, order)


class ExactMatrix:
    """Dense matrix with entries in a single cyclotomic field."""

    __slots__ = ("rows", "cols", "order", "_data")

    def __init__(self, data: Sequence[Sequence] = (), order: int | None = None, shape=None):
        data = [list(r) for r in data]
        if shape is not None:
            nrows, ncols = shape
        else:
            nrows = len(data)
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix rows")
        orders = [x.order for r in data for x in r if isinstance(x, CycScalar)]
        m = lcm(*(orders + [order or 1]))
        self.rows = nrows
        self.cols = ncols
        self.order = m
        if data:
            self._data = tuple(tuple(_lift(as_scalar(x, m), m) for x in r) for r in data)
        else:
            self._data = tuple(() for _ in range(nrows))

    @classmethod
    def _wrap(cls, data, order: int, rows: int, cols: int) -> "ExactMatrix":
        obj = object.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj.order = order
        obj._data = data
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int, order: int = 1) -> "ExactMatrix":
        one, zero = CycScalar.one(order), CycScalar.zero(order)
        return cls._wrap(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), order, n, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, order: int = 1) -> "ExactMatrix":
        zero = CycScalar.zero(order)
        return cls._wrap(tuple(tuple(zero for _ in range(cols)) for _ in range(rows)), order, rows, cols)

    @classmethod
    def diag(cls, values: Sequence, order: int | None = None) -> "ExactMatrix":
        n = len(values)
        orders = [v.order for v in values if isinstance(v, CycScalar)]
        m = lcm(*(orders + [order or 1]))
        data = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(data, order=m)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None, order: int | None = None) -> "ExactMatrix":
        columns = [list(c) for c in columns]
        if not columns:
            if nrows is None:
                raise ValueError("nrows needed for an empty column list")
            return cls.zeros(nrows, 0, order or 1)
        n = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(n)], order=order)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[CycScalar, ...]:
        return tuple(x for r in self._data for x in r)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[CycScalar, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[CycScalar, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[CycScalar, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[CycScalar]]:
        return [list(r) for r in self._data]

    def lift(self, order: int) -> "ExactMatrix":
        if order == self.order:
            return self
        return ExactMatrix._wrap(tuple(tuple(x.lift(order) for x in r) for r in self._data), order, self.rows, self.cols)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for i, r in enumerate(self._data):
            for j, x in enumerate(r):
                if x:
                    out[i, j] = complex(x)
        return out

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self._data for x in r)

    def is_rational(self) -> bool:
        return all(x.is_rational() for r in self._data for x in r)

    # arithmetic ---------------------------------------------------------
    def _common(self, other: "ExactMatrix"):
        if other.order == self.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b = self._common(other)
        data = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a._data, b._data))
        return ExactMatrix._wrap(data, a.order, self.rows, self.cols)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b = self._common(other)
        data = tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a._data, b._data))
        return ExactMatrix._wrap(data, a.order, self.rows, self.cols)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._wrap(tuple(tuple(-x for x in r) for r in self._data), self.order, self.rows, self.cols)

    def scale(self, c) -> "ExactMatrix":
        c = c if isinstance(c, CycScalar) else CycScalar.rational(c, self.order)
        m = lcm(self.order, c.order)
        a = self.lift(m)
        c = c.lift(m)
        return ExactMatrix._wrap(tuple(tuple(c * x for x in r) for r in a._data), m, self.rows, self.cols)

    def __mul__(self, c) -> "ExactMatrix":
        if isinstance(c, ExactMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            # vector
            vec = [as_scalar(x, self.order) for x in other]
            if len(vec) != self.cols:
                raise ValueError("dimension mismatch in matrix-vector product")
            return tuple(_dot(r, vec, self.order) for r in self._data)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self._common(other)
        bcols = [tuple(r[j] for r in b._data) for j in range(b.cols)]
        data = tuple(tuple(_dot(ra, cb, a.order) for cb in bcols) for ra in a._data)
        return ExactMatrix._wrap(data, a.order, a.rows, b.cols)

    def __pow__(self, e: int) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        out = ExactMatrix.identity(self.rows, self.order)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._common(other)
        return a._data == b._data

    def __hash__(self):
        return hash((self.rows, self.cols))

    @property
    def T(self) -> "ExactMatrix":
        data = tuple(tuple(self._data[i][j] for i in range(self.rows)) for j in range(self.cols))
        return ExactMatrix._wrap(data, self.order, self.cols, self.rows)

    @property
    def H(self) -> "ExactMatrix":
        """Conjugate transpose."""
        data = tuple(tuple(self._data[i][j].conjugate() for i in range(self.rows)) for j in range(self.cols))
        return ExactMatrix._wrap(data, self.order, self.cols, self.rows)

    def trace(self) -> CycScalar:
        acc = CycScalar.zero(self.order)
        for i in range(min(self.rows, self.cols)):
            acc = acc + self._data[i][i]
        return acc

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        a, b = self._common(other)
        data = tuple(ra + rb for ra, rb in zip(a._data, b._data))
        return ExactMatrix._wrap(data, a.order, a.rows, a.cols + b.cols)

    def commutes_with(self, other: "ExactMatrix") -> bool:
        return self @ other == other @ self

    # elimination --------------------------------------------------------
    def rref(self) -> tuple["ExactMatrix", list[int]]:
        m = [list(r) for r in self._data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not m[i][c].is_zero()), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][c].inverse()
            m[r] = [inv * x for x in m[r]]
            for i in range(self.rows):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return ExactMatrix._wrap(tuple(tuple(x) for x in m), self.order, self.rows, self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = self.hstack(ExactMatrix.identity(n, self.order))
        red, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise NotInvertibleError("matrix is not invertible")
        data = tuple(tuple(red._data[i][n:]) for i in range(n))
        return ExactMatrix._wrap(data, self.order, n, n)

    def solve(self, rhs: "ExactMatrix") -> "ExactMatrix":
        """Unique solution X of self @ X = rhs (self must have full column rank)."""
        aug = self.hstack(rhs)
        red, piv = aug.rref()
        n = self.cols
        if piv[:n] != list(range(n)) or any(p >= n for p in piv):
            raise NotInvertibleError("system has no unique solution")
        data = tuple(tuple(red._data[i][n:]) for i in range(n))
        return ExactMatrix._wrap(data, red.order, n, rhs.cols)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"ExactMatrix[{self.rows}x{self.cols}, order={self.order}]([{body}])"


def _lift(x: CycScalar, order: int) -> CycScalar:
    return x if x.order == order else x.lift(order)


def _dot(a, b, order: int) -> CycScalar:
    acc = None
    for x, y in zip(a, b):
        if x.is_zero() or y.is_zero():
            continue
        p = x * y
        acc = p if acc is None else acc + p
    return CycScalar.zero(order) if acc is None else acc


# subspaces ---------------------------------------------------------------

def kernel_basis(m: ExactMatrix) -> list[tuple[CycScalar, ...]]:
    """Exact basis of ker m (empty iff m is injective)."""
    red, piv = m.rref()
    free = [c for c in range(m.cols) if c not in piv]
    zero, one = CycScalar.zero(m.order), CycScalar.one(m.order)
    basis = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for r, p in enumerate(piv):
            v[p] = -red[r, f]
        basis.append(tuple(v))
    return basis


def column_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns of m forming a basis of its column space."""
    _, piv = m.rref()
    return ExactMatrix.from_columns([m.column(j) for j in piv], nrows=m.rows, order=m.order)


def canonical_basis(space: ExactMatrix) -> ExactMatrix:
    """The reduced echelon basis of col(space); equal subspaces give equal bases."""
    red, piv = space.T.rref()
    rows = [red.row(i) for i in range(len(piv))]
    return ExactMatrix.from_columns(rows, nrows=space.rows, order=space.order)


def span_sum(*spaces: ExactMatrix) -> ExactMatrix:
    out = spaces[0]
    for s in spaces[1:]:
        out = out.hstack(s)
    return column_basis(out)


def intersect(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Basis of col(a) ∩ col(b); a and b are assumed to have independent columns."""
    if a.cols == 0 or b.cols == 0:
        return ExactMatrix.zeros(a.rows, 0, lcm(a.order, b.order))
    ker = kernel_basis(a.hstack(-b))
    a, _ = a._common(b)
    vecs = [a @ v[: a.cols] for v in ker]
    if not vecs:
        return ExactMatrix.zeros(a.rows, 0, a.order)
    return column_basis(ExactMatrix.from_columns(vecs, order=a.order))


def contains(space: ExactMatrix, other: ExactMatrix) -> bool:
    """True when every column of other lies in col(space)."""
    if other.cols == 0:
        return True
    if space.cols == 0:
        return other.is_zero()
    return space.hstack(other).rank() == space.rank()


# polynomials (coefficient lists, lowest degree first) ---------------------

def _trim(p: list[CycScalar]) -> list[CycScalar]:
    while p and p[-1].is_zero():
        p = p[:-1]
    return p


def _poly_order(*polys) -> int:
    return lcm(*[c.order for p in polys for c in p] + [1])


def poly_divmod(a: list[CycScalar], b: list[CycScalar]):
    a, b = _trim(list(a)), _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    m = _poly_order(a, b)
    a = [_lift(c, m) for c in a]
    b = [_lift(c, m) for c in b]
    if len(a) < len(b):
        return [], a
    inv = b[-1].inverse()
    q = [CycScalar.zero(m)] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(b) - 1] * inv
        q[i] = c
        if not c.is_zero():
            for j, d in enumerate(b):
                r[i + j] = r[i + j] - c * d
    return _trim(q), _trim(r[: len(b) - 1])


def _monic(p: list[CycScalar]) -> list[CycScalar]:
    inv = p[-1].inverse()
    return [c * inv for c in p]


def poly_gcd(a: list[CycScalar], b: list[CycScalar]) -> list[CycScalar]:
    """Monic gcd."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    return _monic(a)


def poly_derivative(p: list[CycScalar]) -> list[CycScalar]:
    return _trim([c * i for i, c in enumerate(p)][1:])


def poly_eval(p: list[CycScalar], x: CycScalar) -> CycScalar:
    m = lcm(_poly_order(p), x.order)
    acc = CycScalar.zero(m)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_matrix(p: list[CycScalar], a: ExactMatrix) -> ExactMatrix:
    n = a.rows
    out = ExactMatrix.zeros(n, n, a.order)
    ident = ExactMatrix.identity(n, a.order)
    for c in reversed(p):
        out = out @ a + ident.scale(c)
    return out


def charpoly(a: ExactMatrix) -> list[CycScalar]:
    """det(x I - a) via Faddeev-LeVerrier; monic, lowest degree first."""
    if not a.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.rows
    coeffs = [CycScalar.zero(a.order)] * (n + 1)
    coeffs[n] = CycScalar.one(a.order)
    ident = ExactMatrix.identity(n, a.order)
    mk = ExactMatrix.zeros(n, n, a.order)
    for k in range(1, n + 1):
        mk = a @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(a @ mk).trace() * Fraction(1, k)
    return coeffs


def squarefree_part(p: list[CycScalar]) -> list[CycScalar]:
    g = poly_gcd(p, poly_derivative(p))
    q, r = poly_divmod(p, g)
    assert not r
    return _monic(q)


def minimal_polynomial_semisimple(ts: ExactMatrix) -> list[CycScalar]:
    """Minimal polynomial of a semisimple matrix (the squarefree part of its characteristic polynomial)."""
    q = squarefree_part(charpoly(ts))
    if not poly_eval_matrix(q, ts).is_zero():
        raise ValueError("matrix is not semisimple")
    return q


# Jordan-Chevalley -----------------------------------------------------------

def jordan_chevalley(t: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Multiplicative decomposition t = t_s @ t_u with t_s semisimple, t_u unipotent.

    Newton iteration s <- s - q(s) q'(s)^-1 on the squarefree part q of the
    characteristic polynomial; it terminates after about log2(n) steps.
    """
    if not t.is_square():
        raise ValueError("Jordan-Chevalley decomposition of a non-square matrix")
    if t.rank() < t.rows:
        raise NotInvertibleError("not invertible")
    q = squarefree_part(charpoly(t))
    dq = poly_derivative(q)
    s = t
    for _ in range(t.rows + 2):
        qs = poly_eval_matrix(q, s)
        if qs.is_zero():
            break
        s = s - qs @ poly_eval_matrix(dq, s).inverse()
    else:  # pragma: no cover - exact Newton always terminates
        raise RuntimeError("Jordan-Chevalley iteration did not terminate")
    u = s.inverse() @ t
    return s, u


def eigen_projectors(ts: ExactMatrix, eigenvalues: Sequence[CycScalar]) -> list[tuple[CycScalar, ExactMatrix]]:
    """Spectral projectors of a semisimple matrix by Lagrange interpolation.

    ``eigenvalues`` must be exactly the distinct roots of the minimal
    polynomial; each projector is prod_{b != a} (ts - l_b) / (l_a - l_b).
    """
    eigenvalues = [as_scalar(e) for e in eigenvalues]
    m = lcm(ts.order, *[e.order for e in eigenvalues])
    ts = ts.lift(m)
    lams = [_lift(as_scalar(e, m), m) for e in eigenvalues]
    for i, a in enumerate(lams):
        for b in lams[:i]:
            if a == b:
                raise ValueError(f"repeated eigenvalue {a}")
    q = minimal_polynomial_semisimple(ts)
    for lam in lams:
        if not poly_eval(q, lam).is_zero():
            raise ValueError(f"{lam} is not a root of the minimal polynomial")
    if len(lams) != len(q) - 1:
        raise ValueError("eigenvalue list does not exhaust the minimal polynomial")
    n = ts.rows
    ident = ExactMatrix.identity(n, m)
    out = []
    for i, a in enumerate(lams):
        p = ident
        for j, b in enumerate(lams):
            if i != j:
                p = (p @ (ts - ident.scale(b))).scale((a - b).inverse())
        out.append((a, p))
    return out


def roots_of_unity_orders(p: list[CycScalar]) -> dict[int, list[CycScalar]] | None:
    """Split a squarefree polynomial into gcds with cyclotomic polynomials.

    Returns {d: gcd(p, Phi_d)} for the orders d that occur, or None when p
    has a root that is not a root of unity.  Only orders d with
    [Q(zeta_lcm(d, M)) : Q(zeta_M)] <= deg p can contribute, which bounds
    the search.
    """
    p = _trim(list(p))
    m = _poly_order(p)
    deg = len(p) - 1
    phim = totient(m)
    bound = 2 * (deg * phim) ** 2 + 2
    found: dict[int, list[CycScalar]] = {}
    rest = p
    for d in range(1, bound + 1):
        if len(rest) <= 1:
            break
        if totient(lcm(d, m)) > deg * phim:
            continue
        phid = [CycScalar.rational(c, m) for c in cyclotomic_poly(d)]
        g = poly_gcd(rest, phid)
        if len(g) > 1:
            found[d] = g
            rest, r = poly_divmod(rest, g)
            assert not r
    if len(rest) > 1:
        return None
    return found
