import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgelattice.cyclotomic import CycScalar
from hodgelattice.exactlin import ExactMatrix
from hodgelattice.generators import jordan_block, random_section, random_unimodular
from hodgelattice.l2decide import (
    DecisionReport,
    Certificate,
    check_implication,
    decide,
    laurent_integrability,
    reduce_quasi_unipotent,
)
from hodgelattice.lattice import canonical_frame, cover_exponent
from hodgelattice.laurent import LaurentSection
from hodgelattice.monodromy import log_decomposition, validate_tuple
from hodgelattice.weight import MultiGrading, multi_grading


def frame_of(*mats, basis="standard"):
    return canonical_frame(log_decomposition(validate_tuple(list(mats))), basis)


def elliptic_frame():
    return frame_of(ExactMatrix([[1, 1], [0, 1]]))


def test_integrability_examples():
    assert laurent_integrability(0, -1) == (False, False)
    assert laurent_integrability(1, 0) == (True, False)
    assert laurent_integrability(-2, -1) == (True, True)
    assert laurent_integrability(5, Fraction(-1, 2)) == (True, False)


def test_integrability_matches_shorthand_away_from_boundary():
    for k in range(-1, 6):
        for i in range(-4, 4):
            conv, boundary = laurent_integrability(k, i)
            assert not boundary
            assert conv == (i >= 0)


def test_decide_examples():
    fr = elliptic_frame()
    rep = decide(LaurentSection.monomial(fr, 1, (0,)), fr)
    assert rep.is_L2 and rep.in_lattice and rep.in_lowest_piece
    [c] = rep.certificates
    assert (c.alpha, c.j, c.degree, c.exponent) == (1, 0, 1, 0)

    rep = decide(LaurentSection.monomial(fr, 1, (-1,)), fr)
    assert not rep.is_L2 and not rep.in_lattice
    assert [c.as_dict() for c in rep.failing()] == [
        {"alpha": 2, "j": 1, "l": 1, "n": -1, "convergent": False, "boundary": False}
    ]

    for alpha in range(2):
        assert decide(LaurentSection.monomial(fr, alpha, (1,)), fr).in_lattice


def test_zero_section():
    fr = elliptic_frame()
    rep = decide(LaurentSection(fr, {}), fr)
    assert rep.is_L2 and rep.in_lattice and rep.certificates == []


def test_decide_errors():
    fr = elliptic_frame()
    other = elliptic_frame()
    with pytest.raises(ValueError, match="different frame"):
        decide(LaurentSection.monomial(other, 0, (0,)), fr)
    qfr = frame_of(ExactMatrix.identity(2).scale(-1), basis="adapted")
    with pytest.raises(ValueError, match="not unipotent"):
        decide(LaurentSection.monomial(qfr, 0, (0,)), qfr)


def test_cancellation_is_seen_exactly():
    # h_1 = s^-1, h_2 = s^-1 in the standard frame of a diagonal unipotent tuple;
    # the homogeneous basis (e_1 - e_2, e_2) keeps one pole
    fr = frame_of(ExactMatrix.identity(2))
    sec = LaurentSection(fr, {0: {(-1,): 1}, 1: {(-1,): 1}})
    rep = decide(sec, fr)
    assert not rep.in_lattice and not rep.is_L2


def test_symbolic_tail_uses_lowest_exponents():
    fr = elliptic_frame()
    sec = LaurentSection(fr, {1: {(0,): 1}, 0: {(3,): 2}}, symbolic_tail=True)
    exact = decide(LaurentSection(fr, sec.coeffs), fr)
    symbolic = decide(sec, fr)
    assert (symbolic.is_L2, symbolic.in_lattice) == (exact.is_L2, exact.in_lattice)


def test_two_variable_decision():
    t = ExactMatrix([[1, 1], [0, 1]])
    fr = frame_of(t, t)
    rep = decide(LaurentSection(fr, {1: {(0, -1): 1}}), fr)
    assert not rep.in_lattice and not rep.is_L2
    by_j = {c.j: c for c in rep.certificates}
    assert by_j[0].convergent and not by_j[1].convergent


def test_reduce_unipotent_is_identity():
    fr = frame_of(ExactMatrix([[1, 1], [0, 1]]), basis="adapted")
    sec = LaurentSection(fr, {0: {(2,): 1}, 1: {(-1,): 3}})
    red = reduce_quasi_unipotent(sec, fr)
    assert red.section.coeffs == sec.coeffs
    assert red.equivalence_holds()


@pytest.mark.parametrize("n, cover, expected", [(0, 0, True), (-1, -2, False)])
def test_reduce_minus_identity(n, cover, expected):
    fr = frame_of(ExactMatrix.identity(2).scale(-1), basis="adapted")
    red = reduce_quasi_unipotent(LaurentSection.monomial(fr, 0, (n,)), fr)
    assert red.exponents[(0, 0)] == (n, 2, 1, cover)
    rep = decide(red.section, red.frame)
    assert rep.in_lattice is expected
    assert red.original_in_lattice() is expected
    assert red.equivalence_holds()


def test_reduce_consistency_over_roots_of_unity():
    for m in range(1, 13):
        for k in range(m):
            t = ExactMatrix([[CycScalar.root_of_unity(m, -k, m)]])
            fr = frame_of(t, basis="adapted")
            (m_eff,) = fr.indices
            (k_eff,) = fr.exponents[0]
            assert Fraction(k_eff, m_eff) == Fraction(k, m)
            for n in range(-5, 6):
                red = reduce_quasi_unipotent(LaurentSection.monomial(fr, 0, (n,)), fr)
                verdict = decide(red.section, red.frame).in_lattice
                assert verdict == (cover_exponent(m_eff, k_eff, n) >= 0) == (cover_exponent(m, k, n) >= 0)


def test_check_implication_examples():
    fr = elliptic_frame()
    good = decide(LaurentSection.monomial(fr, 1, (0,)), fr)
    assert check_implication(good).passed
    bad = decide(LaurentSection.monomial(fr, 1, (-1,)), fr)
    res = check_implication(bad)
    assert res.passed and not res.excluded
    synthetic = DecisionReport(
        certificates=[Certificate(0, 0, -2, -1, True, True)],
        lattice_exponents={(0, 0): -1},
        is_L2=True,
        in_lattice=False,
        boundary=True,
    )
    res = check_implication(synthetic)
    assert res.excluded
    broken = DecisionReport([], {(0, 0): -1}, is_L2=True, in_lattice=False, boundary=False)
    res = check_implication(broken)
    assert not res.passed and res.counterexample is broken


@given(st.integers(0, 10_000))
def test_implication_on_random_sections(seed):
    rng = random.Random(seed)
    fr = rng.choice([elliptic_frame(), frame_of(jordan_block(3))])
    rep = decide(random_section(rng, fr), fr)
    assert rep.implication.passed


@given(st.integers(0, 10_000))
def test_verdict_invariant_under_degree_preserving_change(seed):
    rng = random.Random(seed)
    fr = frame_of(ExactMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]))
    sec = random_section(rng, fr)
    base = multi_grading(fr.logs.N)
    pieces = {}
    for l, p in base.pieces.items():
        g, _ = random_unimodular(p.cols, rng)
        pieces[l] = p @ g
    mixed = MultiGrading(base.filtrations, base.Q, pieces)
    assert mixed.verify()
    a = decide(sec, fr)
    b = decide(sec, fr, gradings=[mixed])
    assert (a.is_L2, a.in_lattice) == (b.is_L2, b.in_lattice)


@given(st.integers(0, 10_000))
def test_lattice_membership_is_frame_intrinsic(seed):
    rng = random.Random(seed)
    logs = log_decomposition(validate_tuple([jordan_block(3)]))
    g, ginv = random_unimodular(3, rng)
    fr = canonical_frame(logs)
    fr2 = canonical_frame(logs, g)
    sec = random_section(rng, fr)
    # w' = w g, so h' = g^-1 h
    sec2 = LaurentSection(fr2, sec.in_basis(ginv))
    a, b = decide(sec, fr), decide(sec2, fr2)
    assert (a.in_lattice, a.is_L2) == (b.in_lattice, b.is_L2)
