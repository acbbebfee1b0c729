import logging
import math
from dataclasses import dataclass

import numpy as np

from config.constants import NUMERICS
from modules.model import PhaseTag, RelaxationPhase
from modules.special_functions import SpecialFunctions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticGcf:
    """
    Coefficients of v(x, y, t) = A x + B y + a x² + b y² + c x y.

    Fields hold numpy scalars or arrays when evaluated on a time grid.
    """
    lin_x: complex
    lin_y: complex
    quad_xx: float
    quad_yy: float
    quad_xy: float

    def dispersion_determinant(self):
        """4ab - c², positive for t > 0"""
        return 4.0 * self.quad_xx * self.quad_yy - self.quad_xy ** 2


class GaussianRelaxation:
    """Closed-form relaxation of a squeezed coherent state in a thermal bath"""

    @staticmethod
    def _decay(gt):
        """x = e^{-2Γt}"""
        gt = np.asarray(gt, dtype=float)
        if np.any(gt < 0):
            raise ValueError("Γt must be non-negative")
        return np.exp(-2.0 * gt)

    @staticmethod
    def gcf_coefficients(params, state, bath, t):
        t = np.asarray(t, dtype=float)
        x = GaussianRelaxation._decay(params.gamma_damp * t)
        omega = params.omega
        sigma2 = state.sigma2(omega)
        k_factor = bath.coth_factor
        cos_t, sin_t = np.cos(omega * t), np.sin(omega * t)
        envelope = np.sqrt(x)

        lin_x = 1j * envelope * (state.p_bar * cos_t - state.q_bar * omega * sin_t)
        lin_y = 1j * envelope * (state.q_bar * cos_t + state.p_bar / omega * sin_t)
        quad_xx = -(omega / 4.0) * k_factor * (1.0 - x) - 0.5 * x * (
            cos_t ** 2 / (4.0 * sigma2) + sigma2 * omega ** 2 * sin_t ** 2
        )
        quad_yy = -k_factor * (1.0 - x) / (4.0 * omega) - 0.5 * x * (
            sigma2 * cos_t ** 2 + sin_t ** 2 / (4.0 * sigma2 * omega ** 2)
        )
        quad_xy = x / (8.0 * sigma2 * omega) * (4.0 * sigma2 ** 2 * omega ** 2 - 1.0) * np.sin(2.0 * omega * t)
        # 1j times a numpy scalar is a plain complex, so go through asarray
        return QuadraticGcf(*(np.asarray(value)[()] for value in (lin_x, lin_y, quad_xx, quad_yy, quad_xy)))

    @staticmethod
    def mean_q(gcf):
        return SpecialFunctions.to_real(-1j * np.asarray(gcf.lin_y), context="<q>")

    @staticmethod
    def mean_p(gcf):
        return SpecialFunctions.to_real(-1j * np.asarray(gcf.lin_x), context="<p>")

    @staticmethod
    def covariance(params, state, bath, t):
        """((Δq)², (Δp)², symmetrized q-p covariance) at time t"""
        gcf = GaussianRelaxation.gcf_coefficients(params, state, bath, t)
        return -2.0 * gcf.quad_yy, -2.0 * gcf.quad_xx, -gcf.quad_xy

    @staticmethod
    def number_moments(params, state, bath, t):
        """
        <a†a> and Var(a†a) at time t.

        E = (p² + ω²q²)/2 is Weyl-ordered, so its Gaussian moments are the
        classical ones: Var = 2 tr(AΣAΣ) + 4 μᵀAΣAμ, less the ordering
        correction ω²/4 that makes the vacuum variance vanish.
        """
        gcf = GaussianRelaxation.gcf_coefficients(params, state, bath, t)
        omega = params.omega
        mean_q, mean_p = GaussianRelaxation.mean_q(gcf), GaussianRelaxation.mean_p(gcf)
        var_q, var_p, cov_qp = -2.0 * gcf.quad_yy, -2.0 * gcf.quad_xx, -gcf.quad_xy
        weight_q, weight_p = 0.5 * omega ** 2, 0.5

        mean_energy = weight_q * (var_q + mean_q ** 2) + weight_p * (var_p + mean_p ** 2)
        trace_term = 2.0 * (weight_q ** 2 * var_q ** 2 + 2.0 * weight_q * weight_p * cov_qp ** 2 + weight_p ** 2 * var_p ** 2)
        weighted_q = weight_q * (weight_q * var_q * mean_q + weight_p * cov_qp * mean_p)
        weighted_p = weight_p * (weight_q * cov_qp * mean_q + weight_p * var_p * mean_p)
        mean_term = 4.0 * (mean_q * weighted_q + mean_p * weighted_p)
        mean_n = mean_energy / omega - 0.5
        var_n = (trace_term + mean_term) / omega ** 2 - 0.25
        return np.asarray(mean_n)[()], np.asarray(var_n)[()]

    @staticmethod
    def _purity_argument(k_factor, squeeze_r, x):
        return x ** 2 + (1.0 - x) ** 2 * k_factor ** 2 + 2.0 * (1.0 - x) * x * k_factor * math.cosh(2.0 * squeeze_r)

    @staticmethod
    def entropy_gaussian(bath, squeeze_r, gt):
        """Entropy -ln Tr ρ² as a function of Γt; exactly 0 at Γt = 0"""
        x = GaussianRelaxation._decay(gt)
        argument = GaussianRelaxation._purity_argument(bath.coth_factor, squeeze_r, x)
        return (0.5 * np.log(argument))[()]

    @staticmethod
    def entropy_rate(bath, squeeze_r, gt):
        """dS/d(Γt)"""
        x = GaussianRelaxation._decay(gt)
        k_factor = bath.coth_factor
        cosh_2r = math.cosh(2.0 * squeeze_r)
        argument = GaussianRelaxation._purity_argument(k_factor, squeeze_r, x)
        slope = 2.0 * x - 2.0 * (1.0 - x) * k_factor ** 2 + 2.0 * k_factor * cosh_2r * (1.0 - 2.0 * x)
        return (-x * slope / argument)[()]

    @staticmethod
    def initial_entropy_rate(bath, squeeze_r):
        """R(0)/Γ"""
        return 2.0 * (bath.coth_factor * math.cosh(2.0 * squeeze_r) - 1.0)

    @staticmethod
    def has_hump(bath, squeeze_r):
        # the tie N_β = sinh²r pushes the maximum to t = ∞
        return bath.n_beta < math.sinh(abs(squeeze_r)) ** 2

    @staticmethod
    def hump_time(bath, squeeze_r):
        """Γt of the entropy maximum, or None when S(t) is monotone"""
        if not GaussianRelaxation.has_hump(bath, squeeze_r):
            return None
        k_factor = bath.coth_factor
        cosh_2r = math.cosh(2.0 * squeeze_r)
        ratio = (1.0 + k_factor ** 2 - 2.0 * k_factor * cosh_2r) / (k_factor * (k_factor - cosh_2r))
        return 0.5 * math.log(ratio)

    @staticmethod
    def entropy_max(bath, squeeze_r):
        if not GaussianRelaxation.has_hump(bath, squeeze_r):
            return None
        k_factor = bath.coth_factor
        cosh_2r = math.cosh(2.0 * squeeze_r)
        numerator = k_factor ** 2 * (cosh_2r ** 2 - 1.0)
        denominator = 2.0 * (k_factor * (cosh_2r - 1.0) - 2.0 * bath.n_beta ** 2)
        return 0.5 * math.log(numerator / denominator)

    @staticmethod
    def classify_gaussian_phase(bath, squeeze_r):
        t_max = GaussianRelaxation.hump_time(bath, squeeze_r)
        if t_max is None:
            return RelaxationPhase(PhaseTag.MONOTONE_FROM_BELOW)
        return RelaxationPhase(PhaseTag.SINGLE_HUMP, (t_max,))

    @staticmethod
    def q_variance(params, state, bath, t):
        """
        Normalized position variance V = (Δq)² / σ_c², split as V = V1 + V2.

        V1 is the common thermal spreading, V2 the squeeze-dependent part
        that decays as e^{-2Γt}.
        """
        t = np.asarray(t, dtype=float)
        x = GaussianRelaxation._decay(params.gamma_damp * t)
        phase = params.omega * t
        v1 = (1.0 - x) * bath.coth_factor
        v2 = x * (
            math.exp(-2.0 * state.squeeze_r) * np.cos(phase) ** 2
            + math.exp(2.0 * state.squeeze_r) * np.sin(phase) ** 2
        )
        return (v1 + v2)[()], v1[()], v2[()]

    @staticmethod
    def critical_gamma(squeeze_r):
        return math.sinh(2.0 * abs(squeeze_r))

    @staticmethod
    def v2_extrema(squeeze_r, gamma_ratio, horizon=None):
        """
        Γt of every stationary point of V2 in (0, horizon].

        With θ = ωt and τ = tan θ the stationarity condition becomes
        γ e^{4r} τ² - (e^{4r} - 1) τ + γ = 0, so each period of θ carries
        the same two roots. Tangency at γ = sinh 2|r| is not an extremum.
        """
        if gamma_ratio <= 0:
            raise ValueError(f"gamma_ratio must be positive, got {gamma_ratio}")
        if horizon is None:
            horizon = NUMERICS["v2_horizon"]
        if gamma_ratio >= GaussianRelaxation.critical_gamma(squeeze_r):
            return []

        e4r = math.exp(4.0 * squeeze_r)
        discriminant = (e4r - 1.0) ** 2 - 4.0 * e4r * gamma_ratio ** 2
        root = math.sqrt(discriminant)
        base_angles = sorted(
            math.atan((e4r - 1.0 + sign * root) / (2.0 * e4r * gamma_ratio)) % math.pi for sign in (-1.0, 1.0)
        )

        times = []
        period = 0
        while gamma_ratio * period * math.pi <= horizon:
            for angle in base_angles:
                gt = gamma_ratio * (angle + period * math.pi)
                if 0.0 < gt <= horizon:
                    times.append(gt)
            period += 1
        logger.debug(f"V2 has {len(times)} extrema up to Γt={horizon} for r={squeeze_r}, γ={gamma_ratio}")
        return times
