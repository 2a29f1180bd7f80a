import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgelattice.asymnorm import (
    ModelMetric,
    Region,
    boundedness_ratio,
    model_factors,
    model_norm,
    model_norm_z,
    region_sample,
)
from hodgelattice.exactlin import ExactMatrix
from hodgelattice.generators import jordan_nilpotent
from hodgelattice.hodgenum import elliptic_model, trivial_model
from hodgelattice.weight import multi_grading

S0 = np.exp(-2 * np.pi)


def elliptic_metric() -> ModelMetric:
    return ModelMetric(multi_grading(elliptic_model().nilpotents))


def test_model_norm_examples():
    m = elliptic_metric()
    assert model_norm(m, [0, 0], [S0]) == 0
    assert np.isclose(model_norm(m, [0, 1], [S0]), 2 * np.pi)
    assert np.isclose(model_norm(m, [1, 1], [S0]), 2 * np.pi + 1 / (2 * np.pi))


def test_model_norm_agrees_in_z_coordinates():
    m = elliptic_metric()
    z = 0.3 + 1.7j
    assert np.isclose(model_norm_z(m, [1, 2], [z]), model_norm(m, [1, 2], [np.exp(2j * np.pi * z)]))


def test_model_norm_rejects_points_outside_disk():
    with pytest.raises(ValueError):
        model_norm(elliptic_metric(), [1, 0], [1.5])


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
def test_positivity(v):
    m = ModelMetric(multi_grading([jordan_nilpotent([3])]))
    v = np.array(v)
    val = model_norm(m, v, [0.3])
    assert val >= 0
    if np.linalg.norm(v) > 1e-6:
        assert val > 0


def test_monotone_degree_dominance():
    m = ModelMetric(multi_grading([jordan_nilpotent([3])]))
    radii = np.array([0.5, 0.1, 1e-3, 1e-8])
    top = model_norm(m, [0, 0, 1], radii[:, None])  # degree 2
    bottom = model_norm(m, [1, 0, 0], radii[:, None])  # degree -2
    middle = model_norm(m, [0, 1, 0], radii[:, None])  # degree 0
    assert np.all(np.diff(top) > 0)
    assert np.all(np.diff(bottom) < 0)
    assert np.allclose(middle, middle[0])


def test_two_variable_factors_match_single_log_form():
    # (L1/L2)^l1 (-L2)^l2 equals (-L1)^l1 (-L2)^(l2 - l1)
    rng = np.random.default_rng(1)
    degs = [(1, 1), (-1, 1), (0, 2), (2, -1)]
    logs = -rng.uniform(0.5, 20, size=(30, 2))
    got = model_factors(degs, logs)
    d = np.array(degs, dtype=float)
    alt = (-logs[:, :1]) ** d[:, 0] * (-logs[:, 1:]) ** (d[:, 1] - d[:, 0])
    assert np.allclose(got, alt, rtol=1e-12)


def test_region_predicate_and_samples():
    r1 = Region(0.5, 1.0, 1)
    pts = region_sample(r1, 200, seed=3)
    assert np.all(pts.imag >= 1)
    assert all(r1.contains(p) for p in pts)
    r2 = Region(0.5, 1.0, 2)
    pts = region_sample(r2, 200, seed=3)
    assert np.all(pts[:, 0].imag >= pts[:, 1].imag) and np.all(pts[:, 1].imag >= 1)
    assert all(r2.contains(p) for p in pts)
    assert not r2.contains([0.7 + 5j, 1j])


def test_region_sample_reproducible():
    r = Region(0.25, 2.0, 1)
    a = region_sample(r, 1, seed=11)
    b = region_sample(r, 1, seed=11)
    assert a.shape == (1, 1) and np.array_equal(a, b)
    assert r.contains(a[0])
    assert not np.array_equal(a, region_sample(r, 1, seed=12))


@pytest.mark.parametrize("a, eps", [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)])
def test_region_rejects_bad_parameters(a, eps):
    with pytest.raises(ValueError):
        Region(a, eps)


def test_elliptic_boundedness():
    a = 0.5
    rep = boundedness_ratio(elliptic_model(), elliptic_metric(), Region(a, 1.0), [[1, 0], [0, 1]], samples=300, seed=0)
    (e1_lo, e1_hi), (e2_lo, e2_hi) = rep.per_vector
    assert np.isclose(e1_lo, 2 * np.pi, rtol=1e-9) and np.isclose(e1_hi, 2 * np.pi, rtol=1e-9)
    assert e2_lo >= 1 / (2 * np.pi) * (1 - 1e-9)
    assert e2_hi <= (1 + a**2) / (2 * np.pi) * (1 + 1e-9)
    assert rep.passed and rep.excluded == 0


def test_trivial_ratio_is_one():
    m = ModelMetric(multi_grading([ExactMatrix([[0]])]))
    rep = boundedness_ratio(trivial_model(), m, Region(0.5, 1.0), [[1]], samples=20)
    assert np.isclose(rep.min_ratio, 1) and np.isclose(rep.max_ratio, 1)


def test_invalid_true_samples_are_excluded():
    def flaky(z):
        return None if z[0].imag < 10 else np.eye(2)

    rep = boundedness_ratio(flaky, elliptic_metric(), Region(0.5, 1.0), [[1, 0]], samples=100, seed=2)
    assert 0 < rep.excluded < 100
