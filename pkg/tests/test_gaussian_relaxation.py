import math

import numpy as np
import pytest

from modules.gaussian_relaxation import GaussianRelaxation
from modules.model import GaussianInitialState, OscillatorParams, PhaseTag, ThermalBath
from utils.helpers import Helpers


@pytest.fixture
def params():
    return OscillatorParams(omega=1.3, gamma_damp=0.2)


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("n_beta", [0.1, 1.0, 5.0])
def test_entropy_starts_at_zero_and_relaxes_to_equilibrium(r, n_beta):
    bath = ThermalBath(n_beta)
    assert GaussianRelaxation.entropy_gaussian(bath, r, 0.0) == 0.0
    assert GaussianRelaxation.entropy_gaussian(bath, r, 50.0) == pytest.approx(math.log1p(2 * n_beta), abs=1e-6)


def test_coherent_state_entropy_reaches_ln3_by_gt_10():
    value = GaussianRelaxation.entropy_gaussian(ThermalBath(1.0), 0.0, 10.0)
    assert value == pytest.approx(math.log(3.0), abs=1e-6)


def test_entropy_rate_matches_central_differences():
    bath = ThermalBath(0.7)
    gt = np.array([0.02, 0.1, 0.5, 1.0, 2.5, 4.0])
    step = 1e-5
    upper = GaussianRelaxation.entropy_gaussian(bath, 1.2, gt + step)
    lower = GaussianRelaxation.entropy_gaussian(bath, 1.2, gt - step)
    numeric = (upper - lower) / (2 * step)
    np.testing.assert_allclose(numeric, GaussianRelaxation.entropy_rate(bath, 1.2, gt), rtol=1e-5, atol=1e-6)


@pytest.mark.parametrize("r, n_beta", [(1.0, 0.3), (2.0, 1.0), (0.4, 0.0)])
def test_initial_rate(r, n_beta):
    bath = ThermalBath(n_beta)
    assert GaussianRelaxation.entropy_rate(bath, r, 0.0) == pytest.approx(
        GaussianRelaxation.initial_entropy_rate(bath, r), rel=1e-12
    )


@pytest.mark.parametrize("r, n_beta", [(1.0, 0.5), (2.0, 1.0), (2.0, 10.0), (1.5, 0.0)])
def test_hump_time_and_entropy_max_agree(r, n_beta):
    bath = ThermalBath(n_beta)
    t_max = GaussianRelaxation.hump_time(bath, r)
    assert t_max > 0
    assert GaussianRelaxation.entropy_gaussian(bath, r, t_max) == pytest.approx(
        GaussianRelaxation.entropy_max(bath, r), abs=1e-9
    )
    assert GaussianRelaxation.entropy_rate(bath, r, t_max) == pytest.approx(0.0, abs=1e-9)


def test_entropy_max_exceeds_equilibrium_value():
    bath = ThermalBath(1.0)
    assert GaussianRelaxation.entropy_max(bath, 2.0) > bath.equilibrium_entropy


def test_critical_values():
    assert math.sinh(1.0) ** 2 == pytest.approx(1.3811, abs=5e-3)
    assert math.sinh(2.0) ** 2 == pytest.approx(13.154, abs=5e-3)
    assert GaussianRelaxation.critical_gamma(1.0) == pytest.approx(3.6269, abs=5e-3)
    assert GaussianRelaxation.critical_gamma(2.0) == pytest.approx(27.289, abs=5e-3)


@pytest.mark.parametrize("n_beta, tag", [
    (1.0, PhaseTag.SINGLE_HUMP),
    (1.38, PhaseTag.SINGLE_HUMP),
    (math.sinh(1.0) ** 2, PhaseTag.MONOTONE_FROM_BELOW),
    (1.39, PhaseTag.MONOTONE_FROM_BELOW),
    (5.0, PhaseTag.MONOTONE_FROM_BELOW),
])
def test_classification_boundary_at_sinh_squared(n_beta, tag):
    phase = GaussianRelaxation.classify_gaussian_phase(ThermalBath(n_beta), 1.0)
    assert phase.tag is tag
    assert len(phase.extremum_times) == tag.extremum_count


def test_coherent_state_is_always_monotone():
    assert not GaussianRelaxation.has_hump(ThermalBath(0.0), 0.0)
    assert GaussianRelaxation.hump_time(ThermalBath(0.5), 0.0) is None
    assert GaussianRelaxation.entropy_max(ThermalBath(0.5), 0.0) is None


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n_beta", [0.0, 0.2, 1.0, 2.0, 5.0, 20.0])
def test_classification_agrees_with_grid_sign_changes(r, n_beta):
    bath = ThermalBath(n_beta)
    grid = np.linspace(0.0, 30.0, 6001)[1:]
    rates = Helpers.finite_difference_rate(GaussianRelaxation.entropy_gaussian(bath, r, grid), grid)
    phase = GaussianRelaxation.classify_gaussian_phase(bath, r)
    assert Helpers.count_sign_changes(rates) == phase.tag.extremum_count


def test_gcf_at_time_zero_reproduces_the_initial_state(params):
    state = GaussianInitialState(q_bar=0.8, p_bar=-0.4, squeeze_r=0.7)
    gcf = GaussianRelaxation.gcf_coefficients(params, state, ThermalBath(2.0), 0.0)
    assert GaussianRelaxation.mean_q(gcf) == pytest.approx(0.8)
    assert GaussianRelaxation.mean_p(gcf) == pytest.approx(-0.4)
    var_q, var_p, cov_qp = GaussianRelaxation.covariance(params, state, ThermalBath(2.0), 0.0)
    sigma2 = state.sigma2(params.omega)
    assert var_q == pytest.approx(sigma2)
    assert var_p == pytest.approx(1.0 / (4.0 * sigma2))
    assert cov_qp == pytest.approx(0.0)


def test_mean_follows_damped_free_motion(params):
    state = GaussianInitialState(q_bar=1.0, p_bar=0.5, squeeze_r=0.3)
    t = np.linspace(0.0, 20.0, 41)
    gcf = GaussianRelaxation.gcf_coefficients(params, state, ThermalBath(1.0), t)
    envelope = np.exp(-params.gamma_damp * t)
    phase = params.omega * t
    expected_q = envelope * (np.cos(phase) + 0.5 / params.omega * np.sin(phase))
    expected_p = envelope * (0.5 * np.cos(phase) - params.omega * np.sin(phase))
    np.testing.assert_allclose(GaussianRelaxation.mean_q(gcf), expected_q, atol=1e-12)
    np.testing.assert_allclose(GaussianRelaxation.mean_p(gcf), expected_p, atol=1e-12)


def test_dispersion_determinant_is_positive_after_t0(params):
    state = GaussianInitialState(squeeze_r=1.0)
    gcf = GaussianRelaxation.gcf_coefficients(params, state, ThermalBath(0.5), np.linspace(0.1, 30.0, 50))
    assert np.all(gcf.dispersion_determinant() > 0)


def test_q_variance_matches_covariance(params):
    state = GaussianInitialState(q_bar=0.2, squeeze_r=1.0)
    bath = ThermalBath(1.5)
    t = np.linspace(0.0, 15.0, 61)
    total, thermal, squeezed = GaussianRelaxation.q_variance(params, state, bath, t)
    var_q, _, _ = GaussianRelaxation.covariance(params, state, bath, t)
    np.testing.assert_allclose(total, var_q / params.sigma_c2, rtol=1e-12)
    np.testing.assert_allclose(total, thermal + squeezed, rtol=1e-14)
    assert total[0] == pytest.approx(math.exp(-2.0))


def test_number_moments_of_the_thermal_limit(params):
    bath = ThermalBath(1.2)
    mean_n, var_n = GaussianRelaxation.number_moments(params, GaussianInitialState(squeeze_r=0.8), bath, 200.0)
    assert mean_n == pytest.approx(1.2, abs=1e-10)
    assert var_n == pytest.approx(1.2 * 2.2, abs=1e-10)


def test_number_moments_of_a_coherent_state_are_poissonian(params):
    state = GaussianInitialState.from_amplitude(0.9, 0.4, 0.0, omega=params.omega)
    mean_n, var_n = GaussianRelaxation.number_moments(params, state, ThermalBath(0.0), 0.0)
    assert mean_n == pytest.approx(0.97, abs=1e-12)
    assert var_n == pytest.approx(0.97, abs=1e-12)


def test_squeezed_vacuum_number_moments(params):
    r = 0.6
    mean_n, var_n = GaussianRelaxation.number_moments(params, GaussianInitialState(squeeze_r=r), ThermalBath(0.0), 0.0)
    assert mean_n == pytest.approx(math.sinh(r) ** 2, abs=1e-12)
    assert var_n == pytest.approx(2.0 * (math.sinh(r) * math.cosh(r)) ** 2, abs=1e-12)


def test_v2_extrema_below_critical_damping():
    times = GaussianRelaxation.v2_extrema(1.0, 2.0)
    assert len(times) == 4
    assert times == sorted(times)
    params = OscillatorParams(omega=1.0, gamma_damp=2.0)
    state = GaussianInitialState(squeeze_r=1.0)
    bath = ThermalBath(1.0)
    step = 1e-6
    for gt in times:
        t = gt / params.gamma_damp
        _, _, ahead = GaussianRelaxation.q_variance(params, state, bath, t + step)
        _, _, behind = GaussianRelaxation.q_variance(params, state, bath, t - step)
        assert abs(ahead - behind) / (2.0 * step) < 1e-6


def test_v2_extrema_count_matches_grid_sign_changes():
    params = OscillatorParams(omega=1.0, gamma_damp=2.0)
    gt = np.linspace(0.0, 10.0, 20001)[1:]
    _, _, squeezed = GaussianRelaxation.q_variance(params, GaussianInitialState(squeeze_r=1.0), ThermalBath(1.0), gt / 2.0)
    rates = Helpers.finite_difference_rate(squeezed, gt)
    assert Helpers.count_sign_changes(rates) == len(GaussianRelaxation.v2_extrema(1.0, 2.0))


@pytest.mark.parametrize("r, gamma_ratio", [(1.0, 4.0), (1.0, math.sinh(2.0)), (0.0, 0.5), (2.0, 30.0)])
def test_v2_is_monotone_at_or_above_critical_damping(r, gamma_ratio):
    assert GaussianRelaxation.v2_extrema(r, gamma_ratio) == []


def test_v2_extrema_rejects_non_positive_damping():
    with pytest.raises(ValueError):
        GaussianRelaxation.v2_extrema(1.0, 0.0)


def test_negative_time_is_rejected():
    with pytest.raises(ValueError):
        GaussianRelaxation.entropy_gaussian(ThermalBath(1.0), 1.0, -0.1)


def test_scalar_time_gives_scalar_observables(params):
    state = GaussianInitialState(q_bar=1.0, p_bar=0.3, squeeze_r=0.8)
    bath = ThermalBath(0.5)
    gcf = GaussianRelaxation.gcf_coefficients(params, state, bath, 3.0)
    series = GaussianRelaxation.gcf_coefficients(params, state, bath, np.array([0.0, 3.0]))
    assert np.ndim(gcf.lin_y) == 0
    assert GaussianRelaxation.mean_q(gcf) == pytest.approx(GaussianRelaxation.mean_q(series)[1])
    assert GaussianRelaxation.mean_p(gcf) == pytest.approx(GaussianRelaxation.mean_p(series)[1])
    var_q, var_p, cov_qp = GaussianRelaxation.covariance(params, state, bath, 3.0)
    assert np.ndim(var_q) == 0 and np.ndim(var_p) == 0 and np.ndim(cov_qp) == 0
    mean_n, var_n = GaussianRelaxation.number_moments(params, state, bath, 3.0)
    assert mean_n == pytest.approx(GaussianRelaxation.number_moments(params, state, bath, np.array([3.0]))[0][0])
    assert var_n > 0
