"""Numerical oracle for radial log-weighted integrals and section L2 norms.

Everything is integrated in u = -log r, where dmu = r dr dtheta becomes
e^{-2u} du dtheta and the disk boundary r -> 0 moves to u -> infinity.
Partial integrals over the annuli r > c are computed for a decreasing
list of cutoffs, and the sequence of increments is classified as
convergent or divergent by fitting its decay.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .asymnorm import ModelMetric, model_norm_z
from .hodgenum import NilpotentOrbitVHS, orbit_hodge_metric
from .laurent import LaurentSection

__all__ = [
    "QuadConfig",
    "QuadratureReport",
    "DEFAULT_CUTOFFS",
    "classify_partials",
    "log_weighted_disk_integral",
    "section_l2_estimate",
    "model_evaluator",
    "hodge_evaluator",
]

DEFAULT_CUTOFFS = tuple(10.0 ** -e for e in range(1, 9))


@dataclass(frozen=True)
class QuadConfig:
    tol: float = 1e-4
    # increments decaying faster than e^{-slope U} count as convergent outright
    slope: float = 0.1
    # with no exponential trend, the power of U must be below this for convergence
    power: float = -1.5
    # convergent trends that miss the tolerance are extended by decades down to this radius
    floor: float = 1e-300
    u_nodes: int = 16
    theta_nodes: int = 16
    max_skip_fraction: float = 0.1


@dataclass
class QuadratureReport:
    cutoffs: tuple[float, ...]
    partials: tuple[float, ...]
    classification: str  # "convergent" | "divergent" | "inconclusive"
    tol: float
    value: float | None = None
    rate: dict | None = None
    outer: float = 1.0
    skipped: int = 0
    evaluated: int = 0
    extended: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def convergent(self) -> bool:
        return self.classification == "convergent"

    def as_dict(self) -> dict:
        return {
            "cutoffs": list(self.cutoffs),
            "partials": list(self.partials),
            "classification": self.classification,
            "tol": self.tol,
            "value": self.value,
            "rate": self.rate,
            "outer": self.outer,
            "skipped": self.skipped,
            "evaluated": self.evaluated,
            "extended": self.extended,
            "notes": list(self.notes),
        }


def _trend(us: np.ndarray, partials: np.ndarray, cfg: QuadConfig) -> tuple[str, dict]:
    inc = np.diff(partials)
    mids = 0.5 * (us[1:] + us[:-1])
    width = np.diff(us)
    if inc.size < 3:
        return "inconclusive", {"reason": "need at least four cutoffs"}
    # increments below rounding of the running total carry no trend information
    negligible = inc <= 1e-14 * np.abs(partials[1:])
    if negligible[-1]:
        return "convergent", {"slope": float("inf"), "power": 0.0}
    if negligible.any():
        keep = ~negligible
        inc, mids, width = inc[keep], mids[keep], width[keep]
        if inc.size < 3:
            return "inconclusive", {"reason": "too few resolvable increments"}
    dens = np.log(np.maximum(inc / width, 1e-300))
    design = np.column_stack([np.ones_like(mids), -mids, np.log(mids)])
    (_, slope, power), *_ = np.linalg.lstsq(design, dens, rcond=None)
    rate = {"slope": float(slope), "power": float(power)}
    if slope > cfg.slope:
        return "convergent", rate
    if slope < -cfg.slope:
        return "divergent", rate
    return ("convergent" if power < cfg.power else "divergent"), rate


def classify_partials(cutoffs: Sequence[float], partials: Sequence[float], cfg: QuadConfig = QuadConfig()):
    """(classification, rate) from partial integrals at decreasing cutoffs."""
    us = -np.log(np.asarray(cutoffs, dtype=float))
    return _trend(us, np.asarray(partials, dtype=float), cfg)


def _settled(partials: Sequence[float], tol: float) -> bool:
    last, prev = partials[-1], partials[-2]
    return abs(last - prev) <= tol * abs(last)


def _check_cutoffs(cutoffs: Sequence[float], outer: float) -> tuple[float, ...]:
    cs = tuple(float(c) for c in cutoffs)
    if any(not 0 < c < outer for c in cs) or any(b >= a for a, b in zip(cs, cs[1:])):
        raise ValueError(f"cutoffs must decrease strictly inside (0, {outer:g})")
    return cs


def log_weighted_disk_integral(
    k: int,
    i,
    cutoffs: Sequence[float] = DEFAULT_CUTOFFS,
    config: QuadConfig = QuadConfig(),
    outer: float | None = None,
) -> QuadratureReport:
    """2 pi int_c^R r^{2i+1} (-log r)^k dr for each cutoff c.

    R defaults to 1 for k >= 0.  For k < 0 the integrand is not integrable
    at r = 1, so the default outer radius is e^{-1}; only the behaviour at
    r -> 0 matters for the classification.
    """
    i = float(i)
    if outer is None:
        outer = 1.0 if k >= 0 else float(np.exp(-1.0))
    cs = list(_check_cutoffs(cutoffs, outer))
    u0 = -np.log(outer)
    a_coef = 2 * i + 2

    def f(u):
        return 2 * np.pi * np.exp(-a_coef * u) * u**k

    def segment(a, b):
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
        return val

    bounds = [u0] + [-np.log(c) for c in cs]
    partials = []
    total = 0.0
    for a, b in zip(bounds, bounds[1:]):
        total += segment(a, b)
        partials.append(total)
    cls, rate = classify_partials(cs, partials, config)
    report = QuadratureReport(tuple(cs), tuple(partials), cls, config.tol, rate=rate, outer=outer)
    if cls == "convergent" and not _settled(partials, config.tol):
        while cs[-1] / 10 >= config.floor and not _settled(partials, config.tol):
            c = cs[-1] / 10
            total += segment(-np.log(cs[-1]), -np.log(c))
            cs.append(c)
            partials.append(total)
        report = QuadratureReport(tuple(cs), tuple(partials), cls, config.tol, rate=rate, outer=outer, extended=True)
        if not _settled(partials, config.tol):
            report.classification = "inconclusive"
            report.notes.append("trend looks convergent but partials did not settle")
    if report.classification == "convergent":
        report.value = float(partials[-1])
    return report


# evaluator signature: (z of shape (K, n), vectors of shape (K, r)) -> |v|^2, NaN where undefined
Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def model_evaluator(metric: ModelMetric) -> Evaluator:
    def ev(z, vectors):
        return np.asarray(model_norm_z(metric, vectors, z))

    return ev


def hodge_evaluator(vhs: NilpotentOrbitVHS) -> Evaluator:
    def ev(z, vectors):
        out = np.full(z.shape[0], np.nan)
        for idx, (pt, v) in enumerate(zip(z, vectors)):
            sample = orbit_hodge_metric(vhs, pt)
            if sample.valid:
                out[idx] = sample.norm_sq(v)
        return out

    return ev


def _as_evaluator(evaluator) -> Evaluator:
    if isinstance(evaluator, ModelMetric):
        return model_evaluator(evaluator)
    if isinstance(evaluator, NilpotentOrbitVHS):
        return hodge_evaluator(evaluator)
    return evaluator


def section_l2_estimate(
    section: LaurentSection,
    evaluator,
    radii: Sequence[float] | None = None,
    cutoffs: Sequence[float] = DEFAULT_CUTOFFS,
    config: QuadConfig | None = None,
) -> QuadratureReport:
    """Tensor-product estimate of int |sigma|^2 dmu over prod_j {c < |s_j| < R_j}.

    Each variable uses Gauss-Legendre nodes on every annulus between
    consecutive cutoffs (in u) and in the angle; the partial for cutoff c
    sums the nodes with all |s_j| > c.  Points where the evaluator is
    undefined are skipped; more than 10% skipped makes the result
    inconclusive.
    """
    n = section.n
    if config is None:
        config = QuadConfig() if n == 1 else QuadConfig(u_nodes=6, theta_nodes=6)
    radii = tuple(radii) if radii is not None else (1.0,) * n
    if len(radii) != n:
        raise ValueError(f"need {n} radii")
    outer = min(radii)
    cs = _check_cutoffs(cutoffs, outer)
    if section.is_zero():
        zeros = (0.0,) * len(cs)
        return QuadratureReport(cs, zeros, "convergent", config.tol, value=0.0, outer=outer)
    ev = _as_evaluator(evaluator)
    xg, wg = np.polynomial.legendre.leggauss(config.u_nodes)
    tg, tw = np.polynomial.legendre.leggauss(config.theta_nodes)
    theta, theta_w = np.pi * tg, np.pi * tw
    axes = []
    for rj in radii:
        bounds = [-np.log(rj)] + [-np.log(c) for c in cs]
        us, ws, seg = [], [], []
        for s_idx, (a, b) in enumerate(zip(bounds, bounds[1:])):
            us.append(0.5 * (b - a) * xg + 0.5 * (a + b))
            ws.append(0.5 * (b - a) * wg)
            seg.append(np.full(config.u_nodes, s_idx))
        u, w, sg = np.concatenate(us), np.concatenate(ws), np.concatenate(seg)
        # z = (theta + i u) / (2 pi); dmu = e^{-2u} du dtheta
        zz = (theta[None, :] + 1j * u[:, None]) / (2 * np.pi)
        ww = (w * np.exp(-2 * u))[:, None] * theta_w[None, :]
        ss = np.broadcast_to(sg[:, None], zz.shape)
        axes.append((zz.ravel(), ww.ravel(), ss.ravel()))
    grids = np.meshgrid(*[np.arange(ax[0].size) for ax in axes], indexing="ij")
    idx = [g.ravel() for g in grids]
    z = np.column_stack([axes[j][0][idx[j]] for j in range(n)])
    weight = np.prod([axes[j][1][idx[j]] for j in range(n)], axis=0)
    shell = np.max([axes[j][2][idx[j]] for j in range(n)], axis=0)
    vals = ev(z, section.values(z))
    bad = ~np.isfinite(vals)
    skipped = int(bad.sum())
    contrib = np.where(bad, 0.0, vals * weight)
    per_shell = np.bincount(shell, weights=contrib, minlength=len(cs))
    partials = tuple(float(x) for x in np.cumsum(per_shell))
    cls, rate = classify_partials(cs, partials, config)
    report = QuadratureReport(cs, partials, cls, config.tol, rate=rate, outer=outer, skipped=skipped, evaluated=vals.size)
    if skipped > config.max_skip_fraction * vals.size:
        report.classification = "inconclusive"
        report.notes.append(f"{skipped} of {vals.size} points skipped")
    elif cls == "convergent":
        if _settled(partials, config.tol):
            report.value = partials[-1]
        else:
            report.classification = "inconclusive"
            report.notes.append("trend looks convergent but partials did not settle")
    return report
