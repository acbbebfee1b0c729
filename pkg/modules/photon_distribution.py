import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from config.constants import NUMERICS, SUPPORTED_RANGES
from modules.gaussian_relaxation import GaussianRelaxation, QuadraticGcf
from modules.model import OscillatorParams
from modules.special_functions import SpecialFunctions
from utils.helpers import NegativeProbabilityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AncillaryGcfCoefficients:
    """
    Rotation-free quadratic GCF in complex coordinates u = u₁ + i u₂.

    Photon-number populations do not see the free rotation, so they follow
    from this non-rotating ancillary evolution; c1 vanishes identically.
    """
    A1: complex
    B1: complex
    a1: float
    b1: float
    c1: float = 0.0

    def widths(self):
        """(d₁², d₂²) = (1/2 - a1, 1/2 - b1)"""
        return 0.5 - self.a1, 0.5 - self.b1


class PhotonDistribution:
    @staticmethod
    def ancillary_coefficients(state, bath, gt, omega=1.0):
        gt = np.asarray(gt, dtype=float)
        if np.any(gt < 0):
            raise ValueError("Γt must be non-negative")
        alpha1, alpha2 = state.coherent_amplitude(omega)
        x = np.exp(-2.0 * gt)
        envelope = np.exp(-gt)
        thermal = -np.expm1(-2.0 * gt) * bath.coth_factor
        r = state.squeeze_r
        return AncillaryGcfCoefficients(
            A1=np.asarray(-2j * envelope * alpha2)[()],
            B1=np.asarray(2j * envelope * alpha1)[()],
            a1=np.asarray(-0.5 * (thermal + x * math.exp(2.0 * r)))[()],
            b1=np.asarray(-0.5 * (thermal + x * math.exp(-2.0 * r)))[()],
        )

    @staticmethod
    @lru_cache(maxsize=None)
    def _central_weight(k):
        """sqrt(C(2k, k) / 4^k)"""
        return math.sqrt(math.comb(2 * k, k) / 4 ** k)

    @staticmethod
    def _hermite_tables(coefficients, degree):
        """Normalized G_k(1 - 1/d², b/(2d²)) for both quadratures, k <= degree"""
        d1_sq, d2_sq = coefficients.widths()
        return [
            SpecialFunctions.scaled_hermite_table(
                degree, 1.0 - 1.0 / width, np.asarray(linear) / (2.0 * width), normalized=True
            )
            for width, linear in ((d1_sq, coefficients.A1), (d2_sq, coefficients.B1))
        ]

    @staticmethod
    def _prefactor(coefficients):
        d1_sq, d2_sq = coefficients.widths()
        lin1, lin2 = np.asarray(coefficients.A1), np.asarray(coefficients.B1)
        return np.exp(lin1 ** 2 / (4.0 * d1_sq) + lin2 ** 2 / (4.0 * d2_sq)) / np.sqrt(d1_sq * d2_sq)

    @staticmethod
    def _population(n, tables, prefactor):
        first, second = tables
        weight = PhotonDistribution._central_weight
        total = sum(
            first[2 * (n - m)] * second[2 * m] * (weight(n - m) * weight(m)) for m in range(n + 1)
        )
        probability = SpecialFunctions.to_real((-1) ** n * prefactor * total, context=f"P({n}, t)")

        tolerance = NUMERICS["probability_tolerance"]
        if np.any(probability < -tolerance) or np.any(probability > 1.0 + tolerance):
            logger.error(f"P({n}, t) left [0, 1]: min {np.min(probability):.3e}, max {np.max(probability):.3e}")
            raise NegativeProbabilityError(f"P({n}, t) is outside [0, 1] beyond tolerance {tolerance}")
        return probability

    @staticmethod
    def _check_photon_number(n):
        if not isinstance(n, (int, np.integer)) or not 0 <= n <= SUPPORTED_RANGES["max_photon_n"]:
            raise ValueError(f"n must be an integer in [0, {SUPPORTED_RANGES['max_photon_n']}], got {n!r}")

    @staticmethod
    def photon_probability(state, bath, n, gt, omega=1.0):
        """
        Population <n|ρ(t)|n> of an initially squeezed coherent state.

        Each Gaussian-Hermite integral contributes (d²-1)^{k/2} H_k(b/(2d sqrt(d²-1))),
        evaluated as the polynomial G_k(d² - 1, b/(2d)) so that d² = 1 needs no
        special case. Dividing G_k by d^k sqrt(2^k k!) keeps every term of
        order one up to the largest supported n. The result depends on ω only
        through the initial amplitude conversion.
        """
        PhotonDistribution._check_photon_number(n)
        coefficients = PhotonDistribution.ancillary_coefficients(state, bath, gt, omega)
        tables = PhotonDistribution._hermite_tables(coefficients, 2 * n)
        return PhotonDistribution._population(n, tables, PhotonDistribution._prefactor(coefficients))

    @staticmethod
    def normalization_cutoff(state, bath, gt, omega=1.0, tolerance=None):
        """
        Photon number past which the populations hold less than tolerance.

        Past its bulk a Gaussian distribution falls off geometrically with
        ratio max|1 - 1/d²| per photon; the ratio is floored so that the
        faster-than-geometric tail of a coherent state is still covered.
        """
        if tolerance is None:
            tolerance = NUMERICS["normalization_tolerance"]
        coefficients = PhotonDistribution.ancillary_coefficients(state, bath, gt, omega)
        d1_sq, d2_sq = coefficients.widths()
        ratio = float(max(np.max(np.abs(1.0 - 1.0 / d1_sq)), np.max(np.abs(1.0 - 1.0 / d2_sq))))
        ratio = max(ratio, NUMERICS["normalization_min_ratio"])

        # number moments do not see the free rotation, so Γ = 1 and t = Γt will do
        mean_n, var_n = GaussianRelaxation.number_moments(OscillatorParams(omega, 1.0), state, bath, gt)
        bulk = float(np.max(mean_n + NUMERICS["normalization_sigmas"] * np.sqrt(np.maximum(var_n, 0.0))))
        tail = math.log(tolerance * (1.0 - ratio)) / math.log(ratio)
        cutoff = int(math.ceil(bulk + tail))

        limit = SUPPORTED_RANGES["max_photon_n"]
        if cutoff > limit:
            logger.warning(f"Photon tail needs n up to {cutoff}; normalizing up to {limit} only")
            return limit
        return cutoff

    @staticmethod
    def distribution(state, bath, gt, n_max=None, omega=1.0):
        """P(0..n_max, t) stacked along the first axis; n_max defaults to the normalization cutoff"""
        if n_max is None:
            n_max = PhotonDistribution.normalization_cutoff(state, bath, gt, omega)
        PhotonDistribution._check_photon_number(n_max)
        coefficients = PhotonDistribution.ancillary_coefficients(state, bath, gt, omega)
        tables = PhotonDistribution._hermite_tables(coefficients, 2 * n_max)
        prefactor = PhotonDistribution._prefactor(coefficients)
        return np.array([PhotonDistribution._population(n, tables, prefactor) for n in range(n_max + 1)])

    @staticmethod
    def p0_squeezed_vacuum(bath, squeeze_r, gt):
        gt = np.asarray(gt, dtype=float)
        if np.any(gt < 0):
            raise ValueError("Γt must be non-negative")
        x = np.exp(-2.0 * gt)
        thermal = (1.0 - x) * bath.coth_factor
        d1_sq = 0.5 + 0.5 * (thermal + x * math.exp(2.0 * squeeze_r))
        d2_sq = 0.5 + 0.5 * (thermal + x * math.exp(-2.0 * squeeze_r))
        return (1.0 / np.sqrt(d1_sq * d2_sq))[()]

    @staticmethod
    def p0_extremum_time(bath, squeeze_r):
        """Γt of the vacuum-population minimum, or None when P(0, t) is monotone"""
        nb = bath.n_beta
        sinh2 = math.sinh(squeeze_r) ** 2
        if nb >= sinh2:
            return None
        numerator = 1.0 + 2.0 * nb + 2.0 * nb ** 2 - bath.coth_factor * math.cosh(2.0 * squeeze_r)
        return 0.5 * math.log(numerator / (2.0 * (1.0 + nb) * (nb - sinh2)))

    @staticmethod
    def thermal_probability(bath, n):
        nb = bath.n_beta
        return nb ** n / (1.0 + nb) ** (n + 1)

    @staticmethod
    def lab_frame_coefficients(params, state, bath, t):
        """
        Quadratic GCF coefficients in (u₁, u₂) with the free rotation kept.

        lin_x/lin_y hold the u₁/u₂ linear terms.
        """
        t = np.asarray(t, dtype=float)
        alpha1, alpha2 = state.coherent_amplitude(params.omega)
        gt = params.gamma_damp * t
        phase = params.omega * t
        cos_t, sin_t = np.cos(phase), np.sin(phase)
        envelope = np.exp(-gt)
        x = envelope ** 2
        thermal = -np.expm1(-2.0 * gt) * bath.coth_factor
        e2r = math.exp(2.0 * state.squeeze_r)
        return QuadraticGcf(
            lin_x=np.asarray(-2j * envelope * (alpha2 * cos_t - alpha1 * sin_t))[()],
            lin_y=np.asarray(2j * envelope * (alpha1 * cos_t + alpha2 * sin_t))[()],
            quad_xx=np.asarray(-0.5 * (thermal + x * (e2r * cos_t ** 2 + sin_t ** 2 / e2r)))[()],
            quad_yy=np.asarray(-0.5 * (thermal + x * (cos_t ** 2 / e2r + e2r * sin_t ** 2)))[()],
            quad_xy=np.asarray(x * math.sinh(2.0 * state.squeeze_r) * np.sin(2.0 * phase))[()],
        )
