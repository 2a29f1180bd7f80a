"""The asymptotic model metric and its comparison with true Hodge norms.

With s_j = exp(2 pi i z_j) one has log|s_j| = -2 pi Im z_j, so the model
weight of a graded piece of degree l is

    prod_{j<n} (Im z_j / Im z_{j+1})^{l_j} * (2 pi Im z_n)^{l_n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .hodgenum import NilpotentOrbitVHS, orbit_hodge_metric
from .weight import MultiGrading

__all__ = [
    "ModelMetric",
    "Region",
    "BoundednessReport",
    "model_norm",
    "model_norm_z",
    "model_factors",
    "region_sample",
    "boundedness_ratio",
]


@dataclass(frozen=True)
class ModelMetric:
    grading: MultiGrading

    @property
    def n(self) -> int:
        return self.grading.n

    @property
    def rank(self) -> int:
        return self.grading.rank


def _log_abs(s: np.ndarray) -> np.ndarray:
    s = np.atleast_2d(np.asarray(s, dtype=complex))
    mod = np.abs(s)
    if np.any(mod <= 0) or np.any(mod >= 1):
        raise ValueError("points must lie in the punctured unit polydisk")
    return np.log(mod)


def model_factors(degrees: Sequence[tuple[int, ...]], logs: np.ndarray) -> np.ndarray:
    """Weights per point and degree; ``logs`` holds log|s_j| with shape (K, n)."""
    logs = np.atleast_2d(logs)
    deg = np.asarray(degrees, dtype=float)  # (D, n)
    n = logs.shape[1]
    # log of each factor, summed: l_j log(L_j / L_{j+1}) and l_n log(-L_n)
    base = np.empty_like(logs)
    base[:, : n - 1] = np.log(logs[:, : n - 1] / logs[:, 1:])
    base[:, n - 1] = np.log(-logs[:, n - 1])
    return np.exp(base @ deg.T)  # (K, D)


def model_norm(metric: ModelMetric, v, s) -> np.ndarray | float:
    """Model norm squared of flat vector(s) v at point(s) s of the punctured polydisk."""
    logs = _log_abs(s)
    return _model_from_logs(metric, v, logs, scalar=np.ndim(s) <= 1 and np.ndim(v) <= 1)


def model_norm_z(metric: ModelMetric, v, z) -> np.ndarray | float:
    """Same, parametrised by z in H^n with s = exp(2 pi i z)."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if np.any(z.imag <= 0):
        raise ValueError("need Im z_j > 0")
    logs = -2 * np.pi * z.imag
    return _model_from_logs(metric, v, logs, scalar=z.shape[0] == 1 and np.ndim(v) <= 1)


def _model_from_logs(metric: ModelMetric, v, logs: np.ndarray, scalar: bool):
    b, inv, degs, q = metric.grading.numeric
    v = np.atleast_2d(np.asarray(v, dtype=complex))
    if v.shape[1] != metric.rank or logs.shape[1] != metric.n:
        raise ValueError("vector or point has the wrong dimension")
    keys = sorted(set(degs))
    factors = model_factors(keys, logs)  # (K, D)
    coords = v @ inv.T  # coefficients in the graded basis, (V, r)
    norms = np.zeros((v.shape[0], len(keys)))
    for d, key in enumerate(keys):
        cols = [i for i, g in enumerate(degs) if g == key]
        comp = coords[:, cols] @ b[:, cols].T  # v_l as vectors in V
        norms[:, d] = np.real(np.einsum("ka,ab,kb->k", np.conj(comp), q, comp))
    if v.shape[0] == 1 or factors.shape[0] == 1 or v.shape[0] == factors.shape[0]:
        out = np.sum(factors * norms, axis=1)
    else:
        raise ValueError("vectors and points must broadcast")
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class Region:
    """|Re z_j| < a, Im z_j / Im z_{j+1} >= eps, Im z_n >= eps."""

    a: float
    eps: float
    n: int = 1

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("a must lie in (0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def contains(self, z) -> bool:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        y = z.imag
        if z.shape != (self.n,) or np.any(np.abs(z.real) >= self.a) or y[-1] < self.eps:
            return False
        return bool(np.all(y[:-1] / y[1:] >= self.eps))


def region_sample(region: Region, count: int, seed: int = 0, span: float = 1e3) -> np.ndarray:
    """Seeded points of the region, log-uniform in the imaginary ratios; shape (count, n)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    n = region.n
    # each successive ratio (and the last coordinate) is eps * 10^U, U ~ uniform(0, log10 span)
    ratios = region.eps * 10 ** rng.uniform(0, np.log10(span), size=(count, n))
    y = np.cumprod(ratios[:, ::-1], axis=1)[:, ::-1]
    x = rng.uniform(-region.a, region.a, size=(count, n))
    z = x + 1j * y
    return z


@dataclass
class BoundednessReport:
    min_ratio: float
    max_ratio: float
    per_vector: list[tuple[float, float]]
    samples: int
    excluded: int
    ratios: np.ndarray = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        finite = np.isfinite(self.min_ratio) and np.isfinite(self.max_ratio)
        return bool(finite and self.min_ratio > 0)

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio


def _true_norms(true, z: np.ndarray, vectors: np.ndarray) -> np.ndarray | None:
    if isinstance(true, NilpotentOrbitVHS):
        sample = orbit_hodge_metric(true, z)
        if not sample.valid:
            return None
        H = sample.H
    else:
        H = true(z)
        if H is None:
            return None
    return np.real(np.einsum("ka,ab,kb->k", np.conj(vectors), H, vectors))


def boundedness_ratio(
    true: NilpotentOrbitVHS | Callable,
    model: ModelMetric,
    region: Region,
    vectors,
    samples: int = 1000,
    seed: int = 0,
    points: np.ndarray | None = None,
) -> BoundednessReport:
    """Extremes of |v|^2_true / |v|^2_model over sampled points of the region.

    ``true`` is an orbit (its Hodge metric is used) or a callable z -> H(z)
    returning None where the metric is undefined; such points are excluded.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    pts = region_sample(region, samples, seed) if points is None else np.atleast_2d(points)
    ratios = np.full((pts.shape[0], vectors.shape[0]), np.nan)
    excluded = 0
    for i, z in enumerate(pts):
        t = _true_norms(true, z, vectors)
        if t is None:
            excluded += 1
            continue
        m = model_norm_z(model, vectors, z[None, :])
        ratios[i] = t / m
    good = ratios[~np.isnan(ratios).any(axis=1)]
    if good.size == 0:
        return BoundednessReport(float("nan"), float("nan"), [], pts.shape[0], excluded, ratios)
    per = [(float(good[:, k].min()), float(good[:, k].max())) for k in range(vectors.shape[0])]
    return BoundednessReport(float(good.min()), float(good.max()), per, pts.shape[0], excluded, ratios)
