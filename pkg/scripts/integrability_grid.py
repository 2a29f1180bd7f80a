"""Tabulate symbolic vs numerical classification of the log-weighted disk integrals."""

import argparse
from dataclasses import dataclass

from hodgelattice.l2decide import laurent_integrability
from hodgelattice.quadrature import QuadConfig, log_weighted_disk_integral


@dataclass
class GridConfig:
    k_max: int = 3
    i_values: tuple = (-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2)
    tol: float = 1e-4


def run(cfg: GridConfig) -> int:
    disagreements = 0
    print(f"{'k':>3} {'i':>5}  {'symbolic':<10} {'numeric':<12} {'boundary':<8} value")
    for k in range(-cfg.k_max, cfg.k_max + 1):
        for i in cfg.i_values:
            conv, boundary = laurent_integrability(k, i)
            rep = log_weighted_disk_integral(k, i, config=QuadConfig(tol=cfg.tol))
            sym = "convergent" if conv else "divergent"
            disagreements += sym != rep.classification
            value = "" if rep.value is None else f"{rep.value:.6g}"
            print(f"{k:>3} {i:>5}  {sym:<10} {rep.classification:<12} {str(boundary):<8} {value}")
    print(f"disagreements: {disagreements}")
    return disagreements


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--tol", type=float, default=1e-4)
    args = ap.parse_args()
    raise SystemExit(1 if run(GridConfig(k_max=args.k_max, tol=args.tol)) else 0)
