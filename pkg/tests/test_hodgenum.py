import numpy as np
import pytest

from hodgelattice.cyclotomic import CycScalar
from hodgelattice.exactlin import ExactMatrix
from hodgelattice.generators import jordan_nilpotent
from hodgelattice.hodgenum import (
    NilpotentOrbitVHS,
    curvature_probe,
    elliptic_model,
    hodge_norms,
    orbit_hodge_metric,
    polarization_check,
    trivial_model,
)

GRID = [complex(x, y) for x in (-0.8, -0.3, 0.0, 0.4, 0.9) for y in np.linspace(1, 5, 5)]


def weight_two_model() -> NilpotentOrbitVHS:
    """Rank three, Hodge numbers (1, 1, 1), N a full Jordan string."""
    S = ExactMatrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    flag = {0: ExactMatrix.identity(3), 1: ExactMatrix([[0, 0], [1, 0], [0, 1]]), 2: ExactMatrix([[0], [0], [1]])}
    return NilpotentOrbitVHS(weight=2, S=S, flag=flag, nilpotents=(jordan_nilpotent([3]),))


def shifted_elliptic() -> NilpotentOrbitVHS:
    """F^1(z) = span(z - 2i, 1): a polarized structure only for Im z > 2."""
    S = ExactMatrix([[0, -1], [1, 0]])
    f1 = ExactMatrix([[CycScalar.gaussian(0, -2)], [CycScalar.rational(1, 4)]])
    return NilpotentOrbitVHS(1, S, {0: ExactMatrix.identity(2, 4), 1: f1}, (ExactMatrix([[0, 1], [0, 0]]),))


@pytest.mark.parametrize("z", GRID)
def test_elliptic_closed_forms(z):
    vhs = elliptic_model()
    s = orbit_hodge_metric(vhs, [z])
    y = z.imag
    assert s.valid
    assert np.isclose(s.norm_sq([z, 1]), 2 * y, rtol=1e-9, atol=0)
    assert np.isclose(s.norm_sq([1, 0]), 1 / y, rtol=1e-9, atol=0)
    assert np.isclose(s.norm_sq([0, 1]), abs(z) ** 2 / y, rtol=1e-9, atol=0)
    assert np.abs(s.H - s.H.conj().T).max() < 1e-12 * np.abs(s.H).max()
    assert np.linalg.eigvalsh(s.H).min() > 0


def test_elliptic_at_i():
    s = orbit_hodge_metric(elliptic_model(), [1j])
    assert np.isclose(s.norm_sq([1j, 1]), 2)
    assert np.isclose(s.norm_sq([0, 1]), 1)


def test_hodge_norms_vectorised():
    out = hodge_norms(elliptic_model(), [2j], [[1, 0], [0, 1]])
    assert np.allclose(out, [0.5, 2.0])


@pytest.mark.parametrize("z", [1j, 1e3j, 0.4 + 0.01j])
def test_elliptic_polarization(z):
    rep = polarization_check(elliptic_model(), [z])
    assert rep.passed
    assert set(rep.min_eigenvalues) == {0, 1}
    assert rep.max_cross < 1e-9


def test_trivial_model():
    vhs = trivial_model()
    assert polarization_check(vhs, [1j]).passed
    assert np.allclose(orbit_hodge_metric(vhs, [3j]).H, [[1]])
    rep = curvature_probe(vhs, [[1j], [2j + 0.5]])
    assert np.allclose(rep.values, 0, atol=1e-8)
    assert rep.passed


def test_weight_two_model():
    vhs = weight_two_model()
    assert vhs.griffiths_transversality()
    for z in (1j, 0.3 + 2j, 5j):
        rep = polarization_check(vhs, [z])
        assert rep.passed and sorted(rep.min_eigenvalues) == [0, 1, 2]
        s = orbit_hodge_metric(vhs, [z])
        assert np.linalg.eigvalsh(s.H).min() > 0
    # lowest piece spanned by (z^2/2, z, 1): log|w|^2 = log(y^2) + const
    rep = curvature_probe(vhs, [[1j], [2j]])
    assert np.allclose(rep.values, [0.5, 0.125], rtol=1e-4)


def test_invalid_samples_are_data():
    vhs = shifted_elliptic()
    low = orbit_hodge_metric(vhs, [1j])
    assert not low.valid and "positive" in low.diagnostics
    degenerate = orbit_hodge_metric(vhs, [2j])
    assert not degenerate.valid
    assert orbit_hodge_metric(vhs, [3j]).valid
    with pytest.raises(ValueError, match="invalid"):
        low.norm_sq([1, 0])
    assert not polarization_check(vhs, [2j]).valid
    rep = curvature_probe(vhs, [[1j], [3j]])
    assert rep.skipped == 1
    assert np.isnan(rep.values[0]) and rep.values[1] > 0


@pytest.mark.parametrize("z", GRID)
def test_curvature_matches_closed_form(z):
    rep = curvature_probe(elliptic_model(), [[z]], step=1e-3)
    assert abs(rep.values[0] - 1 / (4 * z.imag**2)) < 1e-4
    assert rep.passed


def test_curvature_with_supplied_section():
    vhs = elliptic_model()
    rep = curvature_probe(vhs, [[2j]], section=lambda z: np.array([z[0], 1]))
    assert abs(rep.values[0] - 1 / 16) < 1e-4


def test_curvature_two_variables():
    n = ExactMatrix([[0, 1], [0, 0]])
    vhs = NilpotentOrbitVHS(1, ExactMatrix([[0, -1], [1, 0]]), {0: ExactMatrix.identity(2), 1: ExactMatrix([[0], [1]])}, (n, n))
    rep = curvature_probe(vhs, [[1j, 2j]])
    # log(2 Im(z_1 + z_2)) gives the rank-one Levi form 1/(4 y^2) [[1, 1], [1, 1]]
    assert abs(rep.values[0]) < 1e-4
    assert rep.passed


@pytest.mark.parametrize(
    "kwargs, message",
    [
        (dict(S=ExactMatrix([[0, 1], [1, 0]])), "symmetric"),
        (dict(S=ExactMatrix([[0, 0], [0, 0]])), "symmetric|degenerate"),
        (dict(nilpotents=(ExactMatrix([[1, 0], [0, 0]]),)), "nilpotent"),
        (dict(flag={0: ExactMatrix.identity(2), 1: ExactMatrix([[1], [0]]), 2: ExactMatrix([[0], [1]])}), "decreasing"),
    ],
)
def test_validation_errors(kwargs, message):
    base = dict(
        weight=1,
        S=ExactMatrix([[0, -1], [1, 0]]),
        flag={0: ExactMatrix.identity(2), 1: ExactMatrix([[0], [1]])},
        nilpotents=(ExactMatrix([[0, 1], [0, 0]]),),
    )
    base.update(kwargs)
    with pytest.raises(ValueError, match=message):
        NilpotentOrbitVHS(**base)


def test_isotropy_violation_rejected():
    with pytest.raises(ValueError, match="polarization"):
        NilpotentOrbitVHS(2, ExactMatrix.identity(2), {0: ExactMatrix.identity(2)}, (ExactMatrix([[0, 1], [0, 0]]),))
