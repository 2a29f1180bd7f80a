"""Hodge metrics of polarized nilpotent orbits, evaluated numerically.

The orbit filtration is F(z) = exp(sum z_j N_j) F_0.  Where it defines a
Hodge structure, V = ⊕_p V^{p,k-p} with V^{p,k-p} = F^p ∩ conj F^{k-p},
and the Hodge metric is sum_p (-1)^p S^h on the pieces, where
S^h(u, v) = i^{-k} S(u, conj v).  The real structure is entrywise
conjugation in the flat basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .exactlin import ExactMatrix, contains

__all__ = [
    "NilpotentOrbitVHS",
    "HodgeMetricSample",
    "PolarizationReport",
    "CurvatureReport",
    "orbit_hodge_metric",
    "polarization_check",
    "curvature_probe",
    "hodge_norms",
    "elliptic_model",
    "trivial_model",
]


@dataclass(frozen=True)
class NilpotentOrbitVHS:
    """Polarized nilpotent-orbit data: (V, S, weight, F_0, N_1..N_n)."""

    weight: int
    S: ExactMatrix
    flag: Mapping[int, ExactMatrix]
    nilpotents: tuple[ExactMatrix, ...]
    twists: tuple[ExactMatrix, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "nilpotents", tuple(self.nilpotents))
        object.__setattr__(self, "flag", dict(sorted(self.flag.items())))
        self.validate()

    @property
    def rank(self) -> int:
        return self.S.rows

    @property
    def n(self) -> int:
        return len(self.nilpotents)

    @property
    def p_min(self) -> int:
        return min(self.flag)

    @property
    def p_max(self) -> int:
        return max(p for p, b in self.flag.items() if b.cols)

    def F(self, p: int) -> ExactMatrix:
        """F_0^p; below the declared range it is F_0^{p_min}, above it zero."""
        if p <= self.p_min:
            return self.flag[self.p_min]
        for q in sorted(self.flag):
            if q >= p:
                return self.flag[q]
        return ExactMatrix.zeros(self.rank, 0, self.S.order)

    def validate(self) -> None:
        S, k, r = self.S, self.weight, self.rank
        if not S.is_rational():
            raise ValueError("polarization must be rational")
        sign = -1 if k % 2 else 1
        if S.T != S.scale(sign):
            raise ValueError(f"polarization is not (-1)^{k}-symmetric")
        if S.rank() != r:
            raise ValueError("polarization is degenerate")
        for j, nil in enumerate(self.nilpotents):
            if nil.shape != (r, r):
                raise ValueError(f"nilpotent {j + 1} has the wrong shape")
            if not (nil ** r).is_zero():
                raise ValueError(f"N_{j + 1} is not nilpotent")
            if not (nil.T @ S + S @ nil).is_zero():
                raise ValueError(f"N_{j + 1} does not preserve the polarization infinitesimally")
            for p in self.flag:
                if not contains(self.F(p - 1), nil @ self.F(p)):
                    raise ValueError(f"N_{j + 1} F^{p} is not contained in F^{p - 1}")
        ps = sorted(self.flag)
        for a, b in zip(ps, ps[1:]):
            if not contains(self.flag[a], self.flag[b]):
                raise ValueError(f"flag is not decreasing at F^{b}")
        for a in range(len(self.nilpotents)):
            for b in range(a + 1, len(self.nilpotents)):
                if not self.nilpotents[a].commutes_with(self.nilpotents[b]):
                    raise ValueError(f"nilpotents {a + 1} and {b + 1} do not commute")

    def griffiths_transversality(self) -> bool:
        """d/dz_j F^p(z) = N_j F^p(z) ⊆ F^{p-1}(z); reduces to N_j F_0^p ⊆ F_0^{p-1}."""
        return all(
            contains(self.F(p - 1), nil @ self.F(p)) for nil in self.nilpotents for p in range(self.p_min, self.p_max + 1)
        )

    def _numeric(self):
        cached = self.__dict__.get("_num")
        if cached is None:
            cached = (
                self.S.to_numpy(),
                np.array([n.to_numpy() for n in self.nilpotents]) if self.nilpotents else np.zeros((0, self.rank, self.rank)),
                {p: self.F(p).to_numpy() for p in range(self.p_min - 1, self.p_max + 2)},
                [t.to_numpy() for t in self.twists] if self.twists else None,
            )
            self.__dict__["_num"] = cached
        return cached

    def orbit_operator(self, z) -> np.ndarray:
        """exp(sum_j z_j N_j) (times the semisimple twist when one is given)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        S, nils, _, twists = self._numeric()
        r = self.rank
        x = np.einsum("j,jab->ab", z, nils) if len(nils) else np.zeros((r, r), dtype=complex)
        out = np.eye(r, dtype=complex)
        power = np.eye(r, dtype=complex)
        for k in range(1, r + 1):
            power = power @ x
            out = out + power / factorial(k)
        if twists:
            for zj, a in zip(z, twists):
                out = scipy.linalg.expm(2j * np.pi * zj * a) @ out
        return out

    def F_at(self, p: int, z) -> np.ndarray:
        _, _, flag, _ = self._numeric()
        if p <= self.p_min:
            base = flag[self.p_min]
        elif p > self.p_max:
            return np.zeros((self.rank, 0), dtype=complex)
        else:
            base = flag[p]
        return self.orbit_operator(z) @ base


@dataclass
class HodgeMetricSample:
    z: np.ndarray
    H: np.ndarray | None
    valid: bool
    pieces: dict[int, np.ndarray] = field(default_factory=dict)
    diagnostics: str = ""

    def norm_sq(self, v) -> float:
        if not self.valid:
            raise ValueError(f"invalid Hodge metric sample at {self.z}: {self.diagnostics}")
        v = np.asarray(v, dtype=complex)
        return float(np.real(np.conj(v) @ self.H @ v))


def _orth(a: np.ndarray, tol: float) -> np.ndarray:
    if a.shape[1] == 0:
        return a
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0:
        return a[:, :0]
    keep = s > tol * max(s[0], 1.0)
    return u[:, keep]


def _intersect(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    m = np.hstack([a, -b])
    _, s, vh = np.linalg.svd(m)
    s_full = np.zeros(m.shape[1])
    s_full[: s.size] = s
    null = vh.conj().T[:, s_full <= tol * max(s_full[0], 1.0)]
    return _orth(a @ null[: a.shape[1]], tol)


def _sh(vhs: NilpotentOrbitVHS, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # S^h(u_a, v_b) = i^{-k} u_a^T S conj(v_b)
    S = vhs._numeric()[0]
    return (1j) ** (-vhs.weight) * (u.T @ S @ np.conj(v))


def _decompose(vhs: NilpotentOrbitVHS, z: np.ndarray, tol: float):
    k = vhs.weight
    lo = min(vhs.p_min, k - vhs.p_max)
    hi = max(vhs.p_max, k - vhs.p_min)
    pieces = {}
    for p in range(lo, hi + 1):
        fp = _orth(vhs.F_at(p, z), tol)
        fq = _orth(np.conj(vhs.F_at(k - p, z)), tol)
        piece = _intersect(fp, fq, tol)
        if piece.shape[1]:
            pieces[p] = piece
    return pieces


def _hodge_decomposition(vhs: NilpotentOrbitVHS, z, tol: float):
    """(pieces, diagnostics); diagnostics is empty when V = ⊕ V^{p,k-p} at z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (vhs.n,):
        raise ValueError(f"point must have {vhs.n} coordinates")
    if np.any(z.imag <= 0):
        raise ValueError("orbit metric needs Im z_j > 0")
    r = vhs.rank
    pieces = _decompose(vhs, z, tol)
    dims = {p: b.shape[1] for p, b in pieces.items()}
    if sum(dims.values()) != r:
        return pieces, f"bigraded dimensions {dims} do not sum to {r}"
    basis = np.hstack([pieces[p] for p in sorted(pieces)])
    if np.linalg.cond(basis) > 1 / tol:
        return pieces, "bigraded pieces are not in direct sum"
    return pieces, ""


def orbit_hodge_metric(vhs: NilpotentOrbitVHS, z, tol: float = 1e-10) -> HodgeMetricSample:
    """H(z) with |v|^2 = v^* H v; invalid where F(z) is not a polarized Hodge structure."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    pieces, diag = _hodge_decomposition(vhs, z, tol)
    if diag:
        return HodgeMetricSample(z, None, False, pieces, diag)
    r = vhs.rank
    gram = np.zeros((r, r), dtype=complex)
    start = 0
    for p in sorted(pieces):
        b = pieces[p]
        d = b.shape[1]
        block = (-1) ** p * _sh(vhs, b, b)
        if np.linalg.eigvalsh((block + block.conj().T) / 2).min() <= 0:
            return HodgeMetricSample(z, None, False, pieces, f"(-1)^p S^h is not positive on V^{{{p},{vhs.weight - p}}}")
        gram[start : start + d, start : start + d] = block
        start += d
    basis = np.hstack([pieces[p] for p in sorted(pieces)])
    inv = np.linalg.inv(basis)
    H = inv.conj().T @ gram.T @ inv
    return HodgeMetricSample(z, H, True, pieces)


def hodge_norms(vhs: NilpotentOrbitVHS, z, vectors) -> np.ndarray:
    """|v|^2 in the Hodge metric at z for each row of ``vectors``; NaN when invalid."""
    sample = orbit_hodge_metric(vhs, z)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if not sample.valid:
        return np.full(vectors.shape[0], np.nan)
    return np.real(np.einsum("ka,ab,kb->k", np.conj(vectors), sample.H, vectors))


@dataclass
class PolarizationReport:
    valid: bool
    min_eigenvalues: dict[int, float]
    max_cross: float
    tol: float
    diagnostics: str = ""

    @property
    def passed(self) -> bool:
        return self.valid and all(v > 0 for v in self.min_eigenvalues.values()) and self.max_cross < self.tol


def polarization_check(vhs: NilpotentOrbitVHS, z, tol: float = 1e-9) -> PolarizationReport:
    """(-1)^p S^h positive on each V^{p,k-p}; distinct pieces S^h-orthogonal."""
    pieces, diag = _hodge_decomposition(vhs, z, 1e-10)
    if diag:
        return PolarizationReport(False, {}, float("nan"), tol, diag)
    mins = {}
    scale = {}
    for p, b in pieces.items():
        g = (-1) ** p * _sh(vhs, b, b)
        g = (g + g.conj().T) / 2
        ev = np.linalg.eigvalsh(g)
        mins[p] = float(ev.min())
        scale[p] = float(np.abs(ev).max())
    cross = 0.0
    ps = sorted(pieces)
    for i, p in enumerate(ps):
        for q in ps[i + 1 :]:
            c = np.abs(_sh(vhs, pieces[p], pieces[q])).max()
            cross = max(cross, c / np.sqrt(scale[p] * scale[q]))
    return PolarizationReport(True, mins, float(cross), tol)


@dataclass
class CurvatureReport:
    points: np.ndarray
    values: np.ndarray  # min eigenvalue of -ddbar log per point, NaN where skipped
    skipped: int
    tol: float

    @property
    def min_value(self) -> float:
        good = self.values[~np.isnan(self.values)]
        return float(good.min()) if good.size else float("nan")

    @property
    def passed(self) -> bool:
        good = self.values[~np.isnan(self.values)]
        return bool(good.size) and bool(good.min() >= -self.tol)


def _lowest_piece_logdet(vhs: NilpotentOrbitVHS, z: np.ndarray, section: Callable | None) -> float:
    q = vhs.p_max
    if section is not None:
        frame = np.atleast_2d(np.asarray(section(z), dtype=complex)).reshape(vhs.rank, -1)
    else:
        frame = vhs.F_at(q, z)
    gram = (-1) ** q * _sh(vhs, frame, frame)
    sign, logdet = np.linalg.slogdet(gram)
    if abs(sign - 1) > 1e-8:
        return float("nan")
    return float(logdet)


def curvature_probe(
    vhs: NilpotentOrbitVHS,
    grid: Sequence,
    step: float = 1e-3,
    section: Callable | None = None,
    tol: float = 1e-6,
) -> CurvatureReport:
    """Finite-difference -∂∂̄ log det h on the lowest Hodge piece F^q.

    ``section`` may give a holomorphic frame of F^q as a function of z (a
    single section in the rank-one case); the default is the orbit frame
    exp(sum z_j N_j) F_0^q.  For n > 1 the reported value at a point is the
    smallest eigenvalue of the Hermitian matrix -∂_j∂̄_k log det h.
    """
    pts = np.atleast_2d(np.asarray(grid, dtype=complex))
    if pts.shape[1] != vhs.n:
        pts = pts.reshape(-1, vhs.n)
    n = vhs.n
    values = np.full(pts.shape[0], np.nan)
    skipped = 0
    dirs = []
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1
        dirs.append((e, 1j * e))

    def f(z):
        return _lowest_piece_logdet(vhs, z, section)

    for idx, z in enumerate(pts):
        if not orbit_hodge_metric(vhs, z).valid or np.isnan(f(z)):
            skipped += 1
            continue

        def d2(a, b):
            if np.array_equal(a, b):
                return (f(z + step * a) - 2 * f(z) + f(z - step * a)) / step**2
            return (
                f(z + step * a + step * b) - f(z + step * a - step * b) - f(z - step * a + step * b) + f(z - step * a - step * b)
            ) / (4 * step**2)

        levi = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k in range(n):
                xj, yj = dirs[j]
                xk, yk = dirs[k]
                levi[j, k] = 0.25 * (d2(xj, xk) + d2(yj, yk) + 1j * (d2(xj, yk) - d2(yj, xk)))
        curv = -(levi + levi.conj().T) / 2
        val = np.linalg.eigvalsh(curv).min()
        if np.isnan(val):
            skipped += 1
            continue
        values[idx] = val
    return CurvatureReport(points=pts, values=values, skipped=skipped, tol=tol)


def elliptic_model() -> NilpotentOrbitVHS:
    """Weight one, rank two: S = [[0,-1],[1,0]], F^1_0 = span(e_2), N e_2 = e_1."""
    S = ExactMatrix([[0, -1], [1, 0]])
    N = ExactMatrix([[0, 1], [0, 0]])
    flag = {0: ExactMatrix.identity(2), 1: ExactMatrix([[0], [1]])}
    return NilpotentOrbitVHS(weight=1, S=S, flag=flag, nilpotents=(N,))


def trivial_model() -> NilpotentOrbitVHS:
    """Rank one, weight zero, S = 1, one variable with N = 0."""
    return NilpotentOrbitVHS(
        weight=0, S=ExactMatrix([[1]]), flag={0: ExactMatrix.identity(1)}, nilpotents=(ExactMatrix([[0]]),)
    )
