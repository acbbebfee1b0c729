import math

import numpy as np
import pytest

from modules.model import (
    FockInitialState,
    GaussianInitialState,
    OscillatorParams,
    PhaseTag,
    RelaxationPhase,
    ThermalBath,
    TimeGrid,
    UnitConversions,
)


def test_oscillator_params_validation():
    params = OscillatorParams(omega=2.0, gamma_damp=0.5)
    assert params.damping_ratio == pytest.approx(0.25)
    assert params.sigma_c2 == pytest.approx(0.25)
    with pytest.raises(ValueError):
        OscillatorParams(omega=0.0, gamma_damp=1.0)
    with pytest.raises(ValueError):
        OscillatorParams(omega=1.0, gamma_damp=-0.1)


@pytest.mark.parametrize("alpha, omega", [("2i", 0.5 * math.sqrt(5.0)), ("0", 0.5), ("0.6", 0.4)])
def test_params_from_classical_alpha(alpha, omega):
    params = OscillatorParams.from_alpha(alpha)
    assert params.gamma_damp == 1.0
    assert params.omega == pytest.approx(omega)


def test_params_from_alpha_rejects_alpha_of_one_or_more():
    with pytest.raises(ValueError):
        OscillatorParams.from_alpha("1")
    with pytest.raises(ValueError):
        OscillatorParams.from_alpha("1+1i")


def test_thermal_bath():
    bath = ThermalBath(1.0)
    assert bath.coth_factor == 3.0
    assert bath.equilibrium_entropy == pytest.approx(math.log(3.0))
    with pytest.raises(ValueError):
        ThermalBath(-0.1)


def test_gaussian_state_amplitude_round_trip():
    state = GaussianInitialState.from_amplitude(0.7, -0.2, 0.5, omega=2.0)
    assert state.coherent_amplitude(2.0) == pytest.approx((0.7, -0.2))
    assert state.sigma2(2.0) == pytest.approx(math.exp(-1.0) / 4.0)


def test_fock_state_range():
    assert FockInitialState(30).n == 30
    for bad in (-1, 31, 2.0):
        with pytest.raises(ValueError):
            FockInitialState(bad)


def test_time_grid_from_gamma_span():
    grid = TimeGrid.from_gamma_span(5.0, 11, gamma_damp=0.1)
    assert len(grid) == 11
    np.testing.assert_allclose(grid.as_array()[[0, -1]], [0.0, 50.0])


@pytest.mark.parametrize("times", [(), (1.0, 0.5), (-1.0, 0.0), (0.0, float("nan"))])
def test_time_grid_rejects_bad_sequences(times):
    with pytest.raises(ValueError):
        TimeGrid(times)


def test_relaxation_phase_validates_extremum_count():
    phase = RelaxationPhase(PhaseTag.DOUBLE_EXTREMUM, (0.3, math.inf))
    assert phase.to_dict() == {"phase": "DoubleExtremum", "extremum_times": [0.3, math.inf]}
    with pytest.raises(ValueError):
        RelaxationPhase(PhaseTag.SINGLE_HUMP)
    with pytest.raises(ValueError):
        RelaxationPhase(PhaseTag.DOUBLE_EXTREMUM, (0.5, 0.2))
    assert RelaxationPhase(PhaseTag.MONOTONE_FROM_BELOW).extremum_times == ()


def test_temperature_conversions_round_trip():
    bath = UnitConversions.n_beta_from_temperature(1.0, 2.0)
    assert bath.n_beta == pytest.approx(1.0 / math.expm1(0.5))
    assert UnitConversions.temperature_from_n_beta(1.0, bath.n_beta) == pytest.approx(2.0)
    assert UnitConversions.n_beta_from_temperature(1.0, 0.0).n_beta == 0.0


@pytest.mark.parametrize("temperature", [1e-3, 1e-6, 1e-300])
def test_cold_bath_has_no_occupation_instead_of_overflowing(temperature):
    n_beta = UnitConversions.n_beta_from_temperature(1.0, temperature).n_beta
    assert 0.0 <= n_beta < 1e-300


def test_hot_bath_occupation_is_close_to_the_classical_limit():
    assert UnitConversions.n_beta_from_temperature(1.0, 1e6).n_beta == pytest.approx(1e6 - 0.5, rel=1e-9)


def test_critical_temperature_gaussian():
    temperature = UnitConversions.critical_temperature_gaussian(1.0, 1.0)
    bath = UnitConversions.n_beta_from_temperature(1.0, temperature)
    assert bath.n_beta == pytest.approx(math.sinh(1.0) ** 2, rel=1e-12)
    with pytest.raises(ValueError):
        UnitConversions.critical_temperature_gaussian(1.0, 0.0)
