import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgelattice.cyclotomic import CycScalar
from hodgelattice.exactlin import ExactMatrix
from hodgelattice.generators import jordan_block, random_commuting_tuple, random_quasi_unipotent
from hodgelattice.monodromy import (
    MonodromyError,
    exp_nilpotent,
    log_decomposition,
    log_monodromy,
    log_unipotent,
    validate_tuple,
)

HALF = Fraction(1, 2)


def test_validate_examples():
    assert validate_tuple([ExactMatrix([[1, 1], [0, 1]])]).indices == (1,)
    assert validate_tuple([ExactMatrix.identity(2).scale(-1)]).indices == (2,)
    with pytest.raises(MonodromyError, match="not quasi-unipotent"):
        validate_tuple([ExactMatrix([[2, 0], [0, 1]])])


def test_validate_rejects_non_commuting():
    a = ExactMatrix([[1, 1], [0, 1]])
    b = ExactMatrix([[1, 0], [1, 1]])
    with pytest.raises(MonodromyError, match=r"non-commuting pair \(1,2\)"):
        validate_tuple([a, b])


def test_validate_index_is_order_of_semisimple_part():
    z = CycScalar.root_of_unity(12, 5)
    tup = validate_tuple([ExactMatrix.diag([z, CycScalar.root_of_unity(12, 4)])])
    assert tup.indices == (12,)
    assert tup.semisimple[0] ** 12 == ExactMatrix.identity(2, tup.order)


def test_log_unipotent_examples():
    assert log_unipotent(ExactMatrix.identity(2)).is_zero()
    assert log_unipotent(ExactMatrix([[1, 1], [0, 1]])) == ExactMatrix([[0, 1], [0, 0]])
    n3 = log_unipotent(jordan_block(3))
    assert n3 == ExactMatrix([[0, 1, -HALF], [0, 0, 1], [0, 0, 0]])
    assert exp_nilpotent(n3) == jordan_block(3)
    with pytest.raises(MonodromyError):
        log_unipotent(ExactMatrix.identity(2).scale(2))


def test_log_monodromy_examples():
    a, n, _ = log_monodromy(ExactMatrix([[1, 1], [0, 1]]))
    assert a.is_zero() and n == ExactMatrix([[0, 1], [0, 0]])

    lg = log_monodromy(ExactMatrix.identity(2).scale(-1))
    assert lg.A == ExactMatrix.identity(2).scale(-HALF) and lg.N.is_zero()
    assert [(b.k, b.m) for b in lg.table] == [(1, 2)]

    lg = log_monodromy(ExactMatrix([[-1, 1], [0, -1]]))
    assert lg.A == ExactMatrix.identity(2).scale(-HALF)
    assert lg.N == ExactMatrix([[0, -1], [0, 0]])
    assert lg.reconstruct() == ExactMatrix([[-1, 1], [0, -1]])


def test_branch_rule_for_cube_roots():
    z3 = CycScalar.root_of_unity(3)
    lg = log_monodromy(ExactMatrix.diag([z3, z3 * z3]))
    by_k = {b.k: b for b in lg.table}
    # zeta_3 = exp(-2 pi i * 2/3), zeta_3^2 = exp(-2 pi i * 1/3)
    assert by_k[2].eigenvalue == z3
    assert by_k[1].eigenvalue == z3 * z3
    assert sorted(b.exponent for b in lg.table) == [Fraction(-2, 3), Fraction(-1, 3)]


@given(st.integers(0, 10_000))
def test_exp_log_exact(seed):
    rng = random.Random(seed)
    t = random_quasi_unipotent(rng, size=rng.randint(1, 4), order=rng.randint(1, 12))
    lg = log_monodromy(t)
    assert lg.reconstruct() == t.lift(lg.A.order)
    assert lg.A.commutes_with(lg.N)
    assert (lg.N ** t.rows).is_zero()
    for b in lg.table:
        assert -1 < b.exponent <= 0


@given(st.integers(0, 10_000))
def test_logs_of_commuting_tuple_commute(seed):
    rng = random.Random(seed)
    tup = validate_tuple(random_commuting_tuple(rng, n=2, size=rng.randint(1, 4), order=rng.choice([1, 2, 3, 4])))
    logs = log_decomposition(tup)
    mats = logs.A + logs.N
    for x in mats:
        for y in mats:
            assert x.commutes_with(y)
