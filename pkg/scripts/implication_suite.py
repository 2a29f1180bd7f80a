"""Random Laurent sections on Jordan-block models: is L2 without boundary cells ever outside the lattice?"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from hodgelattice.generators import jordan_block, random_section
from hodgelattice.l2decide import decide
from hodgelattice.lattice import canonical_frame
from hodgelattice.monodromy import log_decomposition, validate_tuple


@dataclass
class SuiteConfig:
    sections: int = 1000
    sizes: tuple = (2, 3, 4)
    seed: int = 0
    exponent_range: tuple = (-2, 2)


def run(cfg: SuiteConfig) -> int:
    rng = random.Random(cfg.seed)
    frames = {d: canonical_frame(log_decomposition(validate_tuple([jordan_block(d)]))) for d in cfg.sizes}
    tally: Counter = Counter()
    for t in range(cfg.sections):
        d = cfg.sizes[t % len(cfg.sizes)]
        rep = decide(random_section(rng, frames[d], cfg.exponent_range), frames[d])
        if rep.boundary:
            tally[(d, "boundary", rep.is_L2, rep.in_lattice)] += 1
        else:
            tally[(d, "plain", rep.is_L2, rep.in_lattice)] += 1
    print(f"{'size':>4} {'kind':<9} {'is_L2':<6} {'in_lattice':<10} count")
    for (d, kind, l2, lat), c in sorted(tally.items()):
        print(f"{d:>4} {kind:<9} {str(l2):<6} {str(lat):<10} {c}")
    violations = sum(c for (d, kind, l2, lat), c in tally.items() if kind == "plain" and l2 and not lat)
    print(f"non-boundary violations: {violations}")
    return violations


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sections", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    raise SystemExit(1 if run(SuiteConfig(sections=args.sections, seed=args.seed)) else 0)
