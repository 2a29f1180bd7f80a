"""Finite-difference curvature of the lowest Hodge piece on the elliptic orbit."""

import argparse
from dataclasses import dataclass

import numpy as np

from hodgelattice.hodgenum import curvature_probe, elliptic_model


@dataclass
class ProbeConfig:
    steps: tuple = (1e-2, 1e-3, 1e-4)
    heights: tuple = (1.0, 2.0, 3.0, 5.0)
    x: float = 0.25


def run(cfg: ProbeConfig) -> None:
    vhs = elliptic_model()
    grid = [[complex(cfg.x, y)] for y in cfg.heights]
    exact = np.array([1 / (4 * y * y) for y in cfg.heights])
    print(f"{'step':>8} " + " ".join(f"y={y:<10g}" for y in cfg.heights) + " max err")
    for h in cfg.steps:
        rep = curvature_probe(vhs, grid, step=h)
        err = np.abs(rep.values - exact).max()
        print(f"{h:>8g} " + " ".join(f"{v:<12.8f}" for v in rep.values) + f" {err:.1e}")
    print("closed form 1/(4 y^2): " + " ".join(f"{v:.8f}" for v in exact))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=float, default=0.25)
    run(ProbeConfig(x=ap.parse_args().x))
