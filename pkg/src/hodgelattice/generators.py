"""Random exact test data: quasi-unipotent tuples, nilpotents, Laurent sections.

Conjugations use products of integer elementary matrices, whose inverses are
known exactly, so generation never calls a general matrix inverse.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycScalar
from .exactlin import ExactMatrix
from .laurent import LaurentSection

__all__ = [
    "GeneratorConfig",
    "jordan_block",
    "jordan_nilpotent",
    "random_unimodular",
    "random_quasi_unipotent",
    "random_commuting_tuple",
    "random_nilpotent",
    "random_section",
]


@dataclass(frozen=True)
class GeneratorConfig:
    max_size: int = 6
    max_order: int = 12
    n_elementary: int = 0  # 0 means 2 * size
    coefficient_choices: tuple[int, ...] = (-2, -1, 1, 2)


def jordan_block(size: int, eigenvalue=1, order: int = 1) -> ExactMatrix:
    lam = eigenvalue if isinstance(eigenvalue, CycScalar) else CycScalar.rational(eigenvalue, order)
    order = max(order, lam.order)
    rows = [[lam if i == j else (1 if j == i + 1 else 0) for j in range(size)] for i in range(size)]
    return ExactMatrix(rows, order=order)


def jordan_nilpotent(sizes) -> ExactMatrix:
    """Direct sum of nilpotent Jordan blocks, N e_{i+1} = e_i inside each block."""
    r = sum(sizes)
    rows = [[0] * r for _ in range(r)]
    start = 0
    for d in sizes:
        for i in range(start, start + d - 1):
            rows[i][i + 1] = 1
        start += d
    return ExactMatrix(rows, shape=(r, r))


def _elementary(n: int, a: int, b: int, c: int, order: int) -> ExactMatrix:
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    rows[a][b] = c
    return ExactMatrix(rows, order=order)


def random_unimodular(n: int, rng: random.Random, order: int = 1, steps: int | None = None, choices=(-2, -1, 1, 2)):
    """(P, P^-1) for a random product of integer elementary matrices."""
    p = ExactMatrix.identity(n, order)
    pinv = ExactMatrix.identity(n, order)
    if n < 2:
        return p, pinv
    for _ in range(steps if steps is not None else 2 * n):
        a, b = rng.sample(range(n), 2)
        c = rng.choice(choices)
        p = p @ _elementary(n, a, b, c, order)
        pinv = _elementary(n, a, b, -c, order) @ pinv
    return p, pinv


def _partition(n: int, rng: random.Random) -> list[int]:
    sizes = []
    while n:
        d = rng.randint(1, n)
        sizes.append(d)
        n -= d
    return sizes


def random_quasi_unipotent(rng: random.Random, size: int | None = None, order: int | None = None, cfg=GeneratorConfig()):
    """P (D U) P^-1 with D a diagonal of order-``order`` roots of unity and U unipotent, [D, U] = 0."""
    size = size if size is not None else rng.randint(1, cfg.max_size)
    order = order if order is not None else rng.randint(1, cfg.max_order)
    rows = [[CycScalar.zero(order)] * size for _ in range(size)]
    start = 0
    for d in _partition(size, rng):
        lam = CycScalar.root_of_unity(order, rng.randrange(order), order)
        for i in range(start, start + d):
            rows[i][i] = lam
            if i + 1 < start + d:
                rows[i][i + 1] = lam
        start += d
    core = ExactMatrix(rows, order=order)
    p, pinv = random_unimodular(size, rng, order, cfg.n_elementary or None, cfg.coefficient_choices)
    return p @ core @ pinv


def random_commuting_tuple(rng: random.Random, n: int, size: int, order: int, unipotent: bool = False):
    """n commuting quasi-unipotent matrices, block diagonal up to one common conjugation.

    On a block of size d each T_j is lambda_j (Id + c_j J_d) with J_d the
    nilpotent Jordan block, so all of them are polynomials in J_d.
    """
    blocks = _partition(size, rng)
    mats = []
    for _ in range(n):
        rows = [[CycScalar.zero(order)] * size for _ in range(size)]
        start = 0
        for d in blocks:
            lam = CycScalar.one(order) if unipotent else CycScalar.root_of_unity(order, rng.randrange(order), order)
            c = rng.choice([0, 1, 1, 2])
            for i in range(start, start + d):
                rows[i][i] = lam
                if i + 1 < start + d:
                    rows[i][i + 1] = lam * c
            start += d
        mats.append(ExactMatrix(rows, order=order))
    # unit elementary steps keep the conjugator well conditioned for numerical checks
    p, pinv = random_unimodular(size, rng, order, choices=(-1, 1))
    return [p @ t @ pinv for t in mats]


def random_nilpotent(rng: random.Random, size: int) -> ExactMatrix:
    """Conjugate of a random Jordan nilpotent by an integer unimodular matrix."""
    j = jordan_nilpotent(_partition(size, rng))
    p, pinv = random_unimodular(size, rng)
    return p @ j @ pinv


def random_section(rng: random.Random, frame, exponent_range=(-2, 2), max_terms: int = 3, coeff_range: int = 3):
    """Sum of random monomials h_alpha = c s^e with small integer data."""
    coeffs: dict[int, dict] = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = rng.randrange(frame.rank)
        exps = tuple(rng.randint(*exponent_range) for _ in range(frame.n))
        c = 0
        while c == 0:
            c = rng.randint(-coeff_range, coeff_range)
        poly = coeffs.setdefault(alpha, {})
        poly[exps] = poly.get(exps, 0) + Fraction(c)
    return LaurentSection(frame, coeffs)
