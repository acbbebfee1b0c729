"""
Classical damped oscillator relaxing under the Fokker-Planck equation.

The solution is written with the damping parameter α = sqrt(1 - 4ω²/Γ²),
real for overdamped and imaginary for underdamped motion. All kernels are
entire functions of α², so the helpers below take α² and switch to power
series near critical damping.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from config.constants import NUMERICS
from modules.model import OscillatorParams
from modules.special_functions import SpecialFunctions
from utils.helpers import Helpers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassicalGcf:
    lin_x: complex
    lin_y: complex
    quad_xx: float
    quad_yy: float
    quad_xy: float
    alpha: complex

    def mean_vector(self):
        """(<q>, <p>)"""
        return (
            SpecialFunctions.to_real(-1j * np.asarray(self.lin_y), context="classical <q>"),
            SpecialFunctions.to_real(-1j * np.asarray(self.lin_x), context="classical <p>"),
        )

    def covariance(self):
        """(σ_qq, σ_pp, σ_qp)"""
        return -2.0 * self.quad_yy, -2.0 * self.quad_xx, -self.quad_xy


@dataclass(frozen=True)
class CoarseGrainSpec:
    sigma_q2: float
    sigma_p2: float

    def __post_init__(self):
        if not (self.sigma_q2 > 0 and self.sigma_p2 > 0):
            raise ValueError(f"Smearing variances must be positive, got {self.sigma_q2}, {self.sigma_p2}")

    @classmethod
    def canonical(cls, params, temperature):
        """σ_q² = k_B T / (M Γ²), σ_p² = M k_B T"""
        return cls(sigma_q2=temperature / params.gamma_damp ** 2, sigma_p2=temperature)


class ClassicalRelaxation:
    @staticmethod
    def alpha_squared(params):
        return 1.0 - 4.0 * params.omega ** 2 / params.gamma_damp ** 2

    @staticmethod
    def _kernels(alpha2, x):
        """cosh(αx), sinh(αx)/α and (cosh(αx) - 1)/α² for scaled time x"""
        x = np.asarray(x, dtype=float)
        if abs(alpha2) < NUMERICS["critical_damping_alpha"] ** 2:
            cosh_k = np.zeros_like(x)
            sinh_k = np.zeros_like(x)
            cosh_m1 = np.zeros_like(x)
            for k in range(NUMERICS["series_terms"]):
                even = alpha2 ** k * x ** (2 * k) / math.factorial(2 * k)
                cosh_k = cosh_k + even
                sinh_k = sinh_k + alpha2 ** k * x ** (2 * k + 1) / math.factorial(2 * k + 1)
                cosh_m1 = cosh_m1 + alpha2 ** k * x ** (2 * k + 2) / math.factorial(2 * k + 2)
            return cosh_k, sinh_k, cosh_m1
        alpha = np.sqrt(complex(alpha2))
        cosh_k = np.cosh(alpha * x)
        sinh_k = np.sinh(alpha * x) / alpha
        cosh_m1 = (cosh_k - 1.0) / alpha2
        return (
            SpecialFunctions.to_real(cosh_k, context="cosh kernel"),
            SpecialFunctions.to_real(sinh_k, context="sinh kernel"),
            SpecialFunctions.to_real(cosh_m1, context="cosh-1 kernel"),
        )

    @staticmethod
    def classical_coefficients(params, temperature, q_bar, p_bar, t):
        if temperature <= 0:
            raise ValueError(f"temperature must be positive, got {temperature}")
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("t must be non-negative")
        gamma = params.gamma_damp
        alpha2 = ClassicalRelaxation.alpha_squared(params)
        x = gamma * t

        _, sinh_k, cosh_m1 = ClassicalRelaxation._kernels(alpha2, x)
        half_cosh, half_sinh, _ = ClassicalRelaxation._kernels(alpha2, 0.5 * x)
        decay = np.exp(-x)
        half_decay = np.exp(-0.5 * x)
        growth = np.expm1(x)

        lin_x = 1j * half_decay * (
            p_bar * (half_cosh - half_sinh) + 0.5 * gamma * q_bar * (alpha2 - 1.0) * half_sinh
        )
        lin_y = 1j * half_decay * (2.0 * p_bar / gamma * half_sinh + q_bar * (half_cosh + half_sinh))
        quad_xx = -0.5 * temperature * decay * (growth - cosh_m1 + sinh_k)
        quad_yy = -2.0 * temperature * decay / (gamma ** 2 * (1.0 - alpha2)) * (growth - cosh_m1 - sinh_k)
        quad_xy = -2.0 * temperature / gamma * decay * cosh_m1
        values = (np.asarray(value)[()] for value in (lin_x, lin_y, quad_xx, quad_yy, quad_xy))
        return ClassicalGcf(*values, np.sqrt(complex(alpha2)))

    @staticmethod
    def classical_q_variance(params, temperature, t):
        gcf = ClassicalRelaxation.classical_coefficients(params, temperature, 0.0, 0.0, t)
        return -2.0 * gcf.quad_yy

    @staticmethod
    def normalized_q_variance(params, temperature, t):
        """Vq = (Δq)²_t / (Δq)²_eq"""
        equilibrium = temperature / params.omega ** 2
        return ClassicalRelaxation.classical_q_variance(params, temperature, t) / equilibrium

    @staticmethod
    def classical_energy_moments(params, temperature, q_bar, p_bar, t):
        """
        Mean and variance of E = p²/2 + ω² q²/2.

        For a Gaussian with mean μ and covariance Σ, and E = zᵀ A z,
        Var E = 2 tr(AΣAΣ) + 4 μᵀ AΣA μ.
        """
        gcf = ClassicalRelaxation.classical_coefficients(params, temperature, q_bar, p_bar, t)
        mean_q, mean_p = gcf.mean_vector()
        var_q, var_p, cov_qp = gcf.covariance()
        weight_q = 0.5 * params.omega ** 2
        weight_p = 0.5

        mean_energy = weight_p * (mean_p ** 2 + var_p) + weight_q * (mean_q ** 2 + var_q)
        trace_term = 2.0 * (weight_q ** 2 * var_q ** 2 + 2.0 * weight_q * weight_p * cov_qp ** 2 + weight_p ** 2 * var_p ** 2)
        # A Σ A μ, component-wise
        weighted_q = weight_q * (weight_q * var_q * mean_q + weight_p * cov_qp * mean_p)
        weighted_p = weight_p * (weight_q * cov_qp * mean_q + weight_p * var_p * mean_p)
        mean_term = 4.0 * (mean_q * weighted_q + mean_p * weighted_p)
        return mean_energy, trace_term + mean_term

    @staticmethod
    def energy_variance_curve(alpha, energy_ratio, gt):
        """V(t) = <(ΔE)²>/(k_B T)² at Γ = k_B T = 1 for q̄ = 0, p̄ = sqrt(2λ)"""
        params = OscillatorParams.from_alpha(alpha, gamma_damp=1.0)
        _, variance = ClassicalRelaxation.classical_energy_moments(
            params, 1.0, 0.0, math.sqrt(2.0 * energy_ratio), gt
        )
        return variance

    @staticmethod
    def classical_lambda_critical(alpha):
        """Smallest E₀/(k_B T) at which the energy variance stops being monotone"""
        grid = np.linspace(0.0, NUMERICS["lambda_scan_horizon"], NUMERICS["lambda_scan_points"] + 1)[1:]

        def oscillates(energy_ratio):
            curve = ClassicalRelaxation.energy_variance_curve(alpha, energy_ratio, grid)
            return Helpers.count_sign_changes(Helpers.finite_difference_rate(curve, grid)) > 0

        low, high = NUMERICS["lambda_bracket"]
        critical = Helpers.bisect_predicate(oscillates, low, high, NUMERICS["lambda_tolerance"])
        logger.info(f"λ_c(α={alpha}) = {critical:.4f}")
        return critical

    @staticmethod
    def classical_entropy(params, t):
        """Fine-grained entropy with cell size h = 4π k_B T / Γ; independent of T"""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("The fine-grained classical entropy is singular at t = 0")
        gcf = ClassicalRelaxation.classical_coefficients(params, 1.0, 0.0, 0.0, t)
        argument = gcf.quad_xx * gcf.quad_yy * 4.0 - gcf.quad_xy ** 2
        if np.any(argument <= 0):
            raise ValueError("Dispersion determinant is not positive; Γt is too small to resolve")
        return (math.log(params.gamma_damp) + 0.5 * np.log(argument))[()]

    @staticmethod
    def _smeared_argument(gcf, spec):
        return 4.0 * (0.5 * spec.sigma_p2 - gcf.quad_xx) * (0.5 * spec.sigma_q2 - gcf.quad_yy) - gcf.quad_xy ** 2

    @staticmethod
    def coarse_grained_entropy(params, temperature, t, spec=None):
        """Entropy of the Gaussian-smeared distribution, offset so that S_c(0) = 0"""
        if spec is None:
            spec = CoarseGrainSpec.canonical(params, temperature)
        gcf = ClassicalRelaxation.classical_coefficients(params, temperature, 0.0, 0.0, t)
        argument = ClassicalRelaxation._smeared_argument(gcf, spec)
        if np.any(argument <= 0):
            logger.error("Coarse-grained entropy argument is not positive")
            raise ValueError("Coarse-grained entropy argument is not positive")
        return (0.5 * np.log(argument / (spec.sigma_p2 * spec.sigma_q2)))[()]

    @staticmethod
    def coarse_grained_entropy_canonical(params, t):
        """Closed form for σ_q² = k_B T/Γ², σ_p² = k_B T; T drops out"""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("t must be non-negative")
        alpha2 = ClassicalRelaxation.alpha_squared(params)
        x = params.gamma_damp * t
        _, sinh_k, cosh_m1 = ClassicalRelaxation._kernels(alpha2, x)
        decay = np.exp(-x)
        numerator = (
            2.0 * (5.0 - alpha2)
            + 4.0 * decay ** 2
            - decay * ((13.0 - alpha2) * (1.0 + cosh_m1) + (3.0 + alpha2) * sinh_k)
        )
        return (0.5 * np.log(numerator / (1.0 - alpha2)))[()]

    @staticmethod
    def coarse_grained_entropy_rate(params, t):
        """dS_c/d(Γt) on a time grid, by finite differences"""
        t = np.asarray(t, dtype=float)
        values = ClassicalRelaxation.coarse_grained_entropy_canonical(params, t)
        return Helpers.finite_difference_rate(values, params.gamma_damp * t)
