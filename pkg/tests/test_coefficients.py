import numpy as np
import pytest

from wnvfront.coefficients import (
    CoefficientField,
    LinearizationMatrix,
    TemporalHarmonic,
    almost_period,
    constant_field,
    spatial_profile,
)
from wnvfront.model import default_paper_spec


def test_constant_field_identity():
    f = constant_field(0.37)
    x = np.linspace(-10, 10, 7)
    t = np.linspace(0, 100, 5)
    assert np.all(f.eval(x[:, None], t[None, :]) == 0.37)


def test_alpha1_reference_value():
    # 0.88 * (1 + 0.56) + 0.088 * 2 * 1 at the origin
    spec = default_paper_spec()
    assert spec.alpha1.eval(0.0, 0.0) == pytest.approx(1.5488, abs=1e-12)


def test_other_reference_values_at_origin():
    spec = default_paper_spec()
    assert spec.alpha2.eval(0.0, 0.0) == pytest.approx(0.216, abs=1e-12)
    assert spec.gamma_field.eval(0.0, 0.0) == pytest.approx(0.1, abs=1e-12)
    assert spec.death_field.eval(0.0, 0.0) == pytest.approx(0.029, abs=1e-12)


def test_shift_by_zero_is_identity():
    spec = default_paper_spec()
    x = np.linspace(-5, 5, 11)
    t = np.linspace(0, 40, 13)
    f = spec.alpha1
    np.testing.assert_array_equal(f.shifted(0.0).eval(x[:, None], t), f.eval(x[:, None], t))


def test_constant_shift_is_identity():
    f = constant_field(1.3)
    t = np.linspace(0, 10, 9)
    np.testing.assert_array_equal(f.shifted(123.4).eval(0.0, t), f.eval(0.0, t))


def test_alpha1_exact_period_shift():
    # cos(t/2) has period 4*pi; shifting by it reproduces the field exactly
    spec = default_paper_spec()
    x = np.linspace(-5, 5, 11)
    t = np.linspace(0, 40, 13)
    shifted = spec.alpha1.shifted(4.0 * np.pi)
    np.testing.assert_allclose(shifted.eval(x[:, None], t), spec.alpha1.eval(x[:, None], t),
                               rtol=0, atol=1e-12)


def test_shift_semantics_and_composition():
    spec = default_paper_spec()
    f = spec.gamma_field
    tau = 2.7
    t = np.linspace(0, 30, 17)
    np.testing.assert_allclose(f.shifted(tau).eval(1.0, t), f.eval(1.0, t + tau),
                               rtol=0, atol=1e-12)
    np.testing.assert_allclose(f.shifted(1.1).shifted(2.2).eval(0.5, t),
                               f.shifted(3.3).eval(0.5, t), rtol=0, atol=1e-12)


def test_positivity_on_dense_sample():
    spec = default_paper_spec()
    x = np.linspace(-50, 50, 200)[:, None]
    t = np.linspace(0, 200, 200)[None, :]
    for f in (spec.alpha1, spec.alpha2, spec.gamma_field, spec.death_field):
        assert np.min(f.eval(x, t)) >= f.floor


def test_negative_field_rejected():
    with pytest.raises(ValueError):
        CoefficientField(base=0.1, spatial_amp=5.0, spatial="ratio2_cos", floor=1e-3)


def test_unknown_profile_rejected():
    with pytest.raises(ValueError):
        spatial_profile("no_such_profile", 0.0)
    with pytest.raises(ValueError):
        CoefficientField(base=1.0, spatial="no_such_profile")


def test_harmonic_validation():
    with pytest.raises(ValueError):
        TemporalHarmonic(amplitude=1.5, frequency=1.0)
    with pytest.raises(ValueError):
        TemporalHarmonic(amplitude=0.5, frequency=-1.0)
    with pytest.raises(ValueError):
        TemporalHarmonic(amplitude=0.5, frequency=1.0, kind="tan")


def test_almost_period_translation():
    spec = default_paper_spec()
    tau = almost_period(spec.alpha2, eps=1e-3)
    t = np.linspace(0, 50, 400)
    diff = np.max(np.abs(spec.alpha2.eval(0.0, t + tau) - spec.alpha2.eval(0.0, t)))
    assert diff < 1e-3


def test_linearization_constant_matrix():
    mat = LinearizationMatrix.constant([[-1.0, 1.0], [1.0, -1.0]])
    np.testing.assert_allclose(mat.eval(3.0, 7.0), [[-1.0, 1.0], [1.0, -1.0]], atol=1e-15)


def test_linearization_reference_entries():
    # a1 = alpha1*beta/N1, a2 = alpha2*beta/N1 with beta=0.6, N1=1
    spec = default_paper_spec()
    A = spec.linearization().eval(0.0, 0.0)
    np.testing.assert_allclose(
        A, [[-0.1, 1.5488 * 0.6], [0.216 * 0.6 * 20.0, -0.029]], rtol=0, atol=1e-12
    )


def test_cooperative_signs_random_sample(rng):
    spec = default_paper_spec()
    mat = spec.linearization()
    x = rng.uniform(-100, 100, 10_000)
    t = rng.uniform(0, 500, 10_000)
    m11, m12, m21, m22 = mat.entries(x, t)
    assert np.all(m12 > 0) and np.all(m21 > 0)
    assert np.all(m11 < 0) and np.all(m22 < 0)


def test_shifted_x_recentering():
    spec = default_paper_spec()
    mat = spec.linearization()
    np.testing.assert_allclose(
        mat.shifted_x(3.0).eval(1.0, 2.0), mat.eval(4.0, 2.0), rtol=0, atol=1e-14
    )


def test_constant_matrix_validation():
    with pytest.raises(ValueError):
        LinearizationMatrix.constant([[-1.0, -0.5], [0.5, -1.0]])
    with pytest.raises(ValueError):
        LinearizationMatrix.constant([[1.0, 0.5], [0.5, -1.0]])
