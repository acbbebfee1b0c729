import math

import numpy as np
import pytest

from modules.classical_relaxation import ClassicalRelaxation, CoarseGrainSpec
from modules.lindblad_oracle import ClassicalMomentOracle, ClassicalMomentState
from modules.model import OscillatorParams, TimeGrid

ALPHAS = ["2i", "0", "0.5"]


@pytest.mark.parametrize("alpha", ALPHAS)
def test_coefficients_match_the_moment_oracle(alpha):
    params = OscillatorParams.from_alpha(alpha, gamma_damp=1.0)
    grid = TimeGrid.from_gamma_span(5.0, 51, params.gamma_damp)
    states = ClassicalMomentOracle.classical_moment_evolve(
        params, 1.0, ClassicalMomentState.localized(1.0, 0.5), grid
    )
    gcf = ClassicalRelaxation.classical_coefficients(params, 1.0, 1.0, 0.5, grid.as_array())
    mean_q, mean_p = gcf.mean_vector()
    var_q, var_p, cov_qp = gcf.covariance()

    np.testing.assert_allclose(mean_q, [s.mean[0] for s in states], atol=1e-8)
    np.testing.assert_allclose(mean_p, [s.mean[1] for s in states], atol=1e-8)
    np.testing.assert_allclose(var_q, [s.cov[0, 0] for s in states], atol=1e-8)
    np.testing.assert_allclose(var_p, [s.cov[1, 1] for s in states], atol=1e-8)
    np.testing.assert_allclose(cov_qp, [s.cov[0, 1] for s in states], atol=1e-8)


def test_series_branch_agrees_with_the_closed_kernels():
    x = np.linspace(0.0, 5.0, 11)
    alpha2 = 5e-7
    alpha = math.sqrt(alpha2)
    series = ClassicalRelaxation._kernels(alpha2, x)
    closed = (np.cosh(alpha * x), np.sinh(alpha * x) / alpha, (np.cosh(alpha * x) - 1.0) / alpha2)
    for approximate, exact in zip(series, closed):
        np.testing.assert_allclose(approximate, exact, rtol=1e-8, atol=1e-12)


def test_coefficients_relax_to_equilibrium():
    params = OscillatorParams.from_alpha("2i")
    gcf = ClassicalRelaxation.classical_coefficients(params, 2.0, 1.0, -1.0, 60.0)
    var_q, var_p, cov_qp = gcf.covariance()
    assert var_q == pytest.approx(2.0 / params.omega ** 2)
    assert var_p == pytest.approx(2.0)
    assert cov_qp == pytest.approx(0.0, abs=1e-12)


def test_coefficients_reject_bad_inputs():
    params = OscillatorParams.from_alpha("0.5")
    with pytest.raises(ValueError):
        ClassicalRelaxation.classical_coefficients(params, 0.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ClassicalRelaxation.classical_coefficients(params, 1.0, 0.0, 0.0, -1.0)


@pytest.mark.parametrize("alpha", ["10i", "2i", "0", "0.9"])
def test_position_variance_never_decreases(alpha):
    params = OscillatorParams.from_alpha(alpha)
    # the slowest mode decays as e^{-(1 - |α|)Γt}, so α = 0.9 needs Γt of a few hundred
    t = np.linspace(0.0, 400.0, 40001)
    variance = ClassicalRelaxation.normalized_q_variance(params, 1.0, t)
    assert variance[0] == pytest.approx(0.0, abs=1e-14)
    assert np.all(np.diff(variance) >= -1e-12)
    assert variance[-1] == pytest.approx(1.0, abs=1e-6)


def test_energy_moments_of_the_equilibrium():
    params = OscillatorParams.from_alpha("2i")
    mean_energy, variance = ClassicalRelaxation.classical_energy_moments(params, 1.5, 0.0, 0.0, 80.0)
    assert mean_energy == pytest.approx(1.5)
    assert variance == pytest.approx(1.5 ** 2)


def test_energy_variance_curve_endpoints():
    curve = ClassicalRelaxation.energy_variance_curve("2i", 5.0, np.array([0.0, 80.0]))
    assert curve[0] == pytest.approx(0.0, abs=1e-12)
    assert curve[1] == pytest.approx(1.0)


@pytest.mark.parametrize("alpha, expected", [("2i", 0.508), ("0.2", 0.627)])
def test_lambda_critical(alpha, expected):
    assert ClassicalRelaxation.classical_lambda_critical(alpha) == pytest.approx(expected, abs=1e-2)


@pytest.mark.parametrize("alpha", ["2i", "0", "0.5"])
def test_coarse_grained_entropy_endpoints(alpha):
    params = OscillatorParams.from_alpha(alpha)
    alpha2 = ClassicalRelaxation.alpha_squared(params)
    assert ClassicalRelaxation.coarse_grained_entropy_canonical(params, 0.0) == pytest.approx(0.0, abs=1e-12)
    equilibrium = 0.5 * math.log(2.0 * (5.0 - alpha2) / (1.0 - alpha2))
    assert ClassicalRelaxation.coarse_grained_entropy_canonical(params, 50.0) == pytest.approx(equilibrium, abs=1e-9)


@pytest.mark.parametrize("alpha", ["10i", "0", "0.9"])
def test_coarse_grained_entropy_never_decreases(alpha):
    params = OscillatorParams.from_alpha(alpha)
    t = np.linspace(0.0, 20.0, 4001)
    assert np.all(ClassicalRelaxation.coarse_grained_entropy_rate(params, t) >= -1e-10)


@pytest.mark.parametrize("temperature", [0.5, 3.0])
@pytest.mark.parametrize("alpha", ["2i", "0", "0.5"])
def test_general_smearing_reproduces_the_canonical_closed_form(alpha, temperature):
    params = OscillatorParams.from_alpha(alpha, gamma_damp=2.0)
    t = np.linspace(0.0, 5.0, 101)
    np.testing.assert_allclose(
        ClassicalRelaxation.coarse_grained_entropy(params, temperature, t),
        ClassicalRelaxation.coarse_grained_entropy_canonical(params, t),
        atol=1e-10,
    )


def test_coarse_grain_spec_needs_positive_widths():
    with pytest.raises(ValueError):
        CoarseGrainSpec(0.0, 1.0)
    spec = CoarseGrainSpec.canonical(OscillatorParams(1.0, 2.0), 3.0)
    assert spec.sigma_q2 == pytest.approx(0.75)
    assert spec.sigma_p2 == pytest.approx(3.0)


def closed_entropy(alpha2, gt):
    """Fine-grained entropy written directly in α² and Γt"""
    if alpha2 == 0.0:
        cosh_m1 = 0.5 * gt ** 2
    else:
        alpha = np.sqrt(complex(alpha2))
        cosh_m1 = ((np.cosh(alpha * gt) - 1.0) / alpha2).real
    decay = np.exp(-gt)
    return 0.5 * np.log(4.0 * ((1.0 - decay) ** 2 - 2.0 * decay * cosh_m1) / (1.0 - alpha2))


@pytest.mark.parametrize("alpha", ["2i", "0", "0.5"])
def test_fine_grained_entropy_closed_form(alpha):
    params = OscillatorParams.from_alpha(alpha, gamma_damp=2.0)
    gt = np.linspace(0.2, 10.0, 200)
    np.testing.assert_allclose(
        ClassicalRelaxation.classical_entropy(params, gt / params.gamma_damp),
        closed_entropy(ClassicalRelaxation.alpha_squared(params), gt),
        atol=1e-10,
    )


def test_fine_grained_entropy_is_singular_at_time_zero():
    params = OscillatorParams.from_alpha("2i")
    with pytest.raises(ValueError):
        ClassicalRelaxation.classical_entropy(params, 0.0)


@pytest.mark.parametrize("alpha", ["2i", "0", "0.5"])
def test_scalar_time_gives_scalar_moments(alpha):
    params = OscillatorParams.from_alpha(alpha)
    gcf = ClassicalRelaxation.classical_coefficients(params, 1.0, 0.3, 1.0, 2.0)
    series = ClassicalRelaxation.classical_coefficients(params, 1.0, 0.3, 1.0, np.array([2.0]))
    mean_q, mean_p = gcf.mean_vector()
    assert np.ndim(mean_q) == 0
    assert mean_q == pytest.approx(series.mean_vector()[0][0])
    assert mean_p == pytest.approx(series.mean_vector()[1][0])
    mean_energy, variance = ClassicalRelaxation.classical_energy_moments(params, 1.0, 0.3, 1.0, 2.0)
    assert mean_energy > 0 and variance > 0
