"""Ratio of true to model Hodge norms on the elliptic orbit over sectorial regions."""

import argparse
from dataclasses import dataclass

from hodgelattice.asymnorm import ModelMetric, Region, boundedness_ratio
from hodgelattice.hodgenum import elliptic_model
from hodgelattice.weight import multi_grading


@dataclass
class BoundednessConfig:
    a_values: tuple = (0.1, 0.25, 0.5, 0.75, 0.9)
    epsilon: float = 1.0
    samples: int = 1000
    seed: int = 0


def run(cfg: BoundednessConfig) -> None:
    vhs = elliptic_model()
    metric = ModelMetric(multi_grading(vhs.nilpotents))
    print(f"{'a':>5}  {'e1 min':>10} {'e1 max':>10}  {'e2 min':>10} {'e2 max':>10}  (1+a^2)/2pi")
    for a in cfg.a_values:
        rep = boundedness_ratio(vhs, metric, Region(a, cfg.epsilon), [[1, 0], [0, 1]], samples=cfg.samples, seed=cfg.seed)
        (l1, h1), (l2, h2) = rep.per_vector
        print(f"{a:>5}  {l1:>10.6f} {h1:>10.6f}  {l2:>10.6f} {h2:>10.6f}  {(1 + a * a) / 6.283185307179586:.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(BoundednessConfig(samples=args.samples, seed=args.seed))
