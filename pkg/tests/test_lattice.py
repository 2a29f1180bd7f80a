import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgelattice.cyclotomic import CycScalar
from hodgelattice.exactlin import ExactMatrix
from hodgelattice.generators import random_commuting_tuple
from hodgelattice.lattice import (
    FrameNotAdaptedError,
    base_change_pullback,
    canonical_frame,
    cover_frame,
    evaluate_frame,
    cover_exponent,
    residues,
)
from hodgelattice.laurent import LaurentSection
from hodgelattice.monodromy import log_decomposition, validate_tuple

Z3 = CycScalar.root_of_unity(3)


def _logs(*mats):
    return log_decomposition(validate_tuple(list(mats)))


def test_residue_examples():
    assert residues(_logs(ExactMatrix([[1, 1], [0, 1]]))).eigenvalue_sets() == [[0]]
    assert residues(_logs(ExactMatrix.identity(2).scale(-1))).eigenvalue_sets() == [[Fraction(-1, 2)]]
    rep = residues(_logs(ExactMatrix.diag([Z3, Z3 * Z3])))
    assert rep.eigenvalue_sets() == [[Fraction(-1, 3), Fraction(-2, 3)]]
    assert rep.contained
    assert all(d.charpoly_verified and d.commutes for d in rep.per_divisor)


def test_frame_examples():
    fr = canonical_frame(_logs(ExactMatrix.identity(2)))
    assert np.allclose(evaluate_frame(fr, [0.3 + 2j])[:, 0], [1, 0])

    fr = canonical_frame(_logs(ExactMatrix([[1, 1], [0, 1]])))
    z = 0.4 + 1.5j
    assert np.allclose(evaluate_frame(fr, [z])[:, 1], [z, 1])

    fr = canonical_frame(_logs(ExactMatrix.identity(2).scale(-1)))
    w = evaluate_frame(fr, [z])[:, 0]
    assert np.allclose(w, [np.exp(-1j * np.pi * z), 0])
    assert np.allclose(evaluate_frame(fr, [z + 1])[:, 0], -w)


def test_frame_rejects_lower_half_plane():
    fr = canonical_frame(_logs(ExactMatrix([[1, 1], [0, 1]])))
    with pytest.raises(ValueError):
        evaluate_frame(fr, [0.2 - 1j])


def test_frame_overflow_is_reported():
    fr = canonical_frame(_logs(ExactMatrix.identity(1).scale(-1)))
    with pytest.raises(OverflowError):
        fr.evaluate_many(np.array([[1e3j]]))


@given(st.integers(0, 10_000))
def test_equivariance(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    tup = random_commuting_tuple(rng, n, rng.randint(1, 3), rng.choice([1, 2, 3, 4, 6]))
    logs = _logs(*tup)
    fr = canonical_frame(logs, rng.choice(["standard", "adapted"]))
    pts = np.array([[complex(rng.uniform(-1, 1), rng.uniform(0.2, 2)) for _ in range(n)] for _ in range(20)])
    w = fr.evaluate_many(pts)
    for j in range(n):
        shift = np.zeros(n)
        shift[j] = 1
        w1 = fr.evaluate_many(pts + shift)
        t = logs.tuple.matrices[j].to_numpy()
        err = np.linalg.norm(w1 - t @ w, axis=(1, 2)) / np.linalg.norm(w, axis=(1, 2))
        assert err.max() < 1e-9


def test_adapted_frame_exponents():
    fr = canonical_frame(_logs(ExactMatrix.diag([Z3, Z3 * Z3])), "adapted")
    assert sorted(fr.exponents) == [(1,), (2,)]
    assert not canonical_frame(_logs(ExactMatrix([[0, 1], [1, 0]]))).is_adapted()


def test_pullback_unipotent_is_identity():
    fr = canonical_frame(_logs(ExactMatrix([[1, 1], [0, 1]])), "adapted")
    sec = LaurentSection(fr, {0: {(2,): 3}, 1: {(-1,): 1}})
    pb = base_change_pullback(fr, sec)
    assert pb.coeffs == sec.coeffs


def test_pullback_minus_identity():
    fr = canonical_frame(_logs(ExactMatrix.identity(2).scale(-1)), "adapted")
    pb = base_change_pullback(fr, LaurentSection.monomial(fr, 0, (0,)))
    assert pb.coeffs == {0: {(-1,): 1}}
    jac = base_change_pullback(fr, LaurentSection.monomial(fr, 0, (0,)), jacobian=True)
    assert jac.coeffs == {0: {(0,): 2}}


def test_pullback_cube_root():
    fr = canonical_frame(_logs(ExactMatrix.diag([Z3, Z3 * Z3])), "adapted")
    alpha = fr.exponents.index((2,))
    pb = base_change_pullback(fr, LaurentSection.monomial(fr, alpha, (1,)))
    assert pb.coeffs == {alpha: {(1,): 1}}


def test_pullback_requires_adapted_frame():
    fr = canonical_frame(_logs(ExactMatrix([[0, 1], [1, 0]])))
    with pytest.raises(FrameNotAdaptedError, match="frame not adapted"):
        base_change_pullback(fr, LaurentSection.monomial(fr, 0, (0,)))


def test_pullback_numerically():
    rng = random.Random(7)
    for order in (2, 3, 4, 6):
        logs = _logs(*random_commuting_tuple(rng, 2, 3, order))
        fr = canonical_frame(logs, "adapted")
        cov = cover_frame(fr)
        ms = np.array(fr.indices)
        ks = np.array(fr.exponents)  # (r, n)
        zt = np.array([[complex(rng.uniform(-0.5, 0.5), rng.uniform(0.1, 1)) for _ in range(2)] for _ in range(50)])
        lhs = fr.evaluate_many(zt * ms)
        st_ = np.exp(2j * np.pi * zt)
        factor = np.prod(st_[:, None, :] ** (-ks[None, :, :]), axis=2)  # (K, r)
        rhs = cov.evaluate_many(zt) * factor[:, None, :]
        err = np.linalg.norm(lhs - rhs, axis=(1, 2)) / np.linalg.norm(rhs, axis=(1, 2))
        assert err.max() < 1e-9


def test_cover_exponent_equivalence():
    for m in range(1, 13):
        for k in range(m):
            for n in range(-5, 6):
                assert (cover_exponent(m, k, n) >= 0) == (n >= 0)
