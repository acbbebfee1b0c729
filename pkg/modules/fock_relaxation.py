"""
Relaxation of an initial Fock state |n> in a thermal bath.

Entropies are Γt-functions of (n, N_β) only. The purity is a polynomial of
degree 2n in w = 1 - 1/a², where a² = 1 + (2N_β + 1)(e^{2Γt} - 1); it is
summed from positive terms, and every term is regular at t = 0 (w = 0).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from config.constants import NUMERICS, SUPPORTED_RANGES
from modules.model import FockInitialState, PhaseTag, RelaxationPhase, ThermalBath
from modules.special_functions import SpecialFunctions
from utils.helpers import Helpers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FockGcfEvaluation:
    value: complex
    u: complex

    @property
    def modulus(self):
        """|e^v|, bounded by 1"""
        return math.exp(self.value.real)


class FockRelaxation:
    @staticmethod
    def _check_time(gt):
        gt = np.asarray(gt, dtype=float)
        if np.any(gt < 0):
            raise ValueError("Γt must be non-negative")
        return gt

    @staticmethod
    def _hermite_sum(n, u):
        """(-1)^n / (n! 4^n) Σ_m C(n, m) H_2m(u₂) H_2(n-m)(u₁), equal to L_n(|u|²)"""
        total = 0.0
        for m in range(n + 1):
            total += math.comb(n, m) * SpecialFunctions.hermite(2 * m, u.imag) * SpecialFunctions.hermite(
                2 * (n - m), u.real
            )
        return (-1) ** n * total / (math.factorial(n) * 4.0 ** n)

    @staticmethod
    def fock_gcf(n, bath, u, gt):
        """Evaluate v(u, t) for ρ(0) = |n><n|"""
        FockInitialState(n)
        gt = float(FockRelaxation._check_time(gt))
        u = complex(u)
        shrunk = math.exp(-gt) * u
        argument = FockRelaxation._hermite_sum(n, shrunk)
        if argument <= 0:
            raise ValueError(
                f"GCF logarithm argument {argument:.3e} is not positive at u={u}, Γt={gt}; "
                "the point lies beyond a zero of the Laguerre factor"
            )
        value = (
            -0.5 * abs(shrunk) ** 2
            + math.log(argument)
            + 0.5 * bath.coth_factor * (math.exp(-2.0 * gt) - 1.0) * abs(u) ** 2
        )
        return FockGcfEvaluation(complex(value), u)

    @staticmethod
    def _ip_polynomial(m1, m2):
        """Descending coefficients of the polynomial P with IP(m₁, m₂) = 4^M Γ(M+½) P(w) / a"""
        total = m1 + m2
        series = SpecialFunctions.hyp2f1_coefficients(m1, m2, 0.5 - total)
        coefficients = np.zeros(total + 1)
        coefficients[: series.size] = (-1) ** total * series / 2.0 ** np.arange(series.size)
        return coefficients

    @staticmethod
    def ip_integral(m1, m2, a2):
        """∫ H_2m₁(x) H_2m₂(x) e^{-a² x²} dx over the real line"""
        a2 = np.asarray(a2, dtype=float)
        if np.any(a2 <= 0):
            raise ValueError(f"a² must be positive, got {a2}")
        total = m1 + m2
        w = 1.0 - 1.0 / a2
        polynomial = np.polyval(FockRelaxation._ip_polynomial(m1, m2), w)
        return (4.0 ** total * SpecialFunctions.gamma_half(total) * polynomial / np.sqrt(a2))[()]

    @staticmethod
    def purity_double_sum(n, bath, gt):
        """
        Tr ρ² as the double sum of Hermite-product integrals,

            e^{2Γt} / ((n! 4^n)² π) Σ C(n, m₁) C(n, m₂) IP(m₁, m₂) IP(n-m₁, n-m₂).

        Its terms alternate in sign, so it is only used as a cross-check for
        small n; entropy_fock evaluates the same purity from positive terms.
        """
        FockInitialState(n)
        if n > NUMERICS["double_sum_max_n"]:
            raise ValueError(f"The double sum loses precision beyond n={NUMERICS['double_sum_max_n']}, got n={n}")
        gt = FockRelaxation._check_time(gt)
        a2 = 1.0 + bath.coth_factor * np.expm1(2.0 * gt)
        total = np.zeros_like(a2)
        for m1 in range(n + 1):
            for m2 in range(n + 1):
                total = total + math.comb(n, m1) * math.comb(n, m2) * FockRelaxation.ip_integral(
                    m1, m2, a2
                ) * FockRelaxation.ip_integral(n - m1, n - m2, a2)
        return (np.exp(2.0 * gt) * total / ((math.factorial(n) * 4.0 ** n) ** 2 * math.pi))[()]

    @staticmethod
    def _spread(bath, x):
        """D = e^{-2Γt} + (1 - e^{-2Γt})(2N_β + 1) = e^{-2Γt} a²"""
        return x + (1.0 - x) * bath.coth_factor

    @staticmethod
    def _purity_basis(bath, gt):
        """(D, w, 1 - w) with w = 1 - 1/a² = (1 - e^{-2Γt}) K / D, both parts formed without cancellation"""
        x = np.exp(-2.0 * gt)
        spread = FockRelaxation._spread(bath, x)
        return spread, (1.0 - x) * bath.coth_factor / spread, x / spread

    @staticmethod
    def _level_weights(n, first, ndim):
        """(k, C(n, k)²) for k = first..n, shaped to broadcast against a grid of dimension ndim"""
        k = np.arange(first, n + 1).reshape((-1,) + (1,) * ndim)
        squared = np.array([float(math.comb(n, j)) ** 2 for j in range(first, n + 1)]).reshape(k.shape)
        return k, squared

    @staticmethod
    def purity_polynomial(n, bath, gt):
        """
        D Tr ρ² = Σ_k C(n, k)² w^{2k} (1-w)^{2(n-k)}.

        This is (1-w)^{2n} ₂F₁(-n, -n; 1; w²/(1-w)²), the closed form of the
        double sum over m₁, m₂. Every term is positive, so it holds full
        precision up to the largest supported n.
        """
        FockInitialState(n)
        gt = FockRelaxation._check_time(gt)
        _, w, complement = FockRelaxation._purity_basis(bath, gt)
        k, squared = FockRelaxation._level_weights(n, 0, np.ndim(gt))
        return np.sum(squared * w ** (2 * k) * complement ** (2 * (n - k)), axis=0)[()]

    @staticmethod
    def entropy_fock(n, bath, gt):
        gt = FockRelaxation._check_time(gt)
        spread, _, _ = FockRelaxation._purity_basis(bath, gt)
        entropy = np.log(spread) - np.log(FockRelaxation.purity_polynomial(n, bath, gt))
        entropy = np.where(gt < NUMERICS["zero_time"], 0.0, entropy)
        return entropy[()]

    @staticmethod
    def entropy_fock_rate(n, bath, gt):
        """
        dS_n/d(Γt) = -2 + (2K/D) (2n + 1 - Σ 2k T_k / (w Σ T_k)),

        T_k being the terms of purity_polynomial. The division by w is done
        inside each k >= 1 term, so t = 0 is regular.
        """
        gt = FockRelaxation._check_time(gt)
        spread, w, complement = FockRelaxation._purity_basis(bath, gt)
        k, squared = FockRelaxation._level_weights(n, 1, np.ndim(gt))
        weighted = np.sum(2 * k * squared * w ** (2 * k - 1) * complement ** (2 * (n - k)), axis=0)
        level_ratio = weighted / FockRelaxation.purity_polynomial(n, bath, gt)
        return (-2.0 + 2.0 * bath.coth_factor / spread * (2 * n + 1 - level_ratio))[()]

    @staticmethod
    def initial_entropy_rate(n, bath):
        """dS_n/d(Γt) at t = 0"""
        return 4.0 * ((2 * n + 1) * bath.n_beta + n)

    @staticmethod
    def entropy_fock1_closed(bath, gt):
        gt = FockRelaxation._check_time(gt)
        x = np.exp(-2.0 * gt)
        spread = FockRelaxation._spread(bath, x)
        second = x ** 2 + (1.0 - x) ** 2 * bath.coth_factor ** 2
        return (3.0 * np.log(spread) - np.log(second))[()]

    @staticmethod
    def entropy_fock1_rate(bath, gt):
        gt = FockRelaxation._check_time(gt)
        x = np.exp(-2.0 * gt)
        k_factor = bath.coth_factor
        spread = FockRelaxation._spread(bath, x)
        second = x ** 2 + (1.0 - x) ** 2 * k_factor ** 2
        d_second = 2.0 * x - 2.0 * (1.0 - x) * k_factor ** 2
        return (-2.0 * x * (3.0 * (1.0 - k_factor) / spread - d_second / second))[()]

    @staticmethod
    def fock1_extrema(bath):
        """
        Γt of the stationary points of S₁(t), in increasing order.

        Stationarity of the closed form reduces to a quadratic in x = e^{-2Γt}:
        2N(1+K²) x² - (8N K² - 2K(1+K²)) x - K²(3-K) = 0, K = 2N + 1,
        which is linear at N = 0.
        Only roots with 0 < x < 1 are physical times.
        """
        k_factor = bath.coth_factor
        lead = 2.0 * bath.n_beta * (1.0 + k_factor ** 2)
        middle = 4.0 * (k_factor - 1.0) * k_factor ** 2 - 2.0 * k_factor * (1.0 + k_factor ** 2)
        constant = -(k_factor ** 2) * (3.0 - k_factor)

        if lead == 0.0:
            roots = [constant / middle]
        else:
            discriminant = middle ** 2 - 4.0 * lead * constant
            if discriminant < 0:
                return []
            root = math.sqrt(discriminant)
            roots = [(middle + root) / (2.0 * lead), (middle - root) / (2.0 * lead)]
        times = sorted(-0.5 * math.log(x) for x in roots if 0.0 < x < 1.0)
        return times

    @staticmethod
    def has_interior_extremum(n, bath):
        """True when dS_n/dt turns negative anywhere on the scan grid"""
        grid = np.linspace(0.0, NUMERICS["fock_scan_horizon"], NUMERICS["fock_scan_points"] + 1)[1:]
        rates = FockRelaxation.entropy_fock_rate(n, bath, grid)
        return bool(np.any(rates < -NUMERICS["sign_change_floor"]))

    @staticmethod
    @lru_cache(maxsize=None)
    def fock_critical_nc(n):
        """Largest N_β for which S_n(t) still has an interior extremum"""
        if not isinstance(n, int) or not 1 <= n <= SUPPORTED_RANGES["max_critical_n"]:
            raise ValueError(f"n must be an integer in [1, {SUPPORTED_RANGES['max_critical_n']}], got {n!r}")

        def predicate(n_beta):
            return FockRelaxation.has_interior_extremum(n, ThermalBath(n_beta))

        low, high = float(n), float(n) + 2.0
        while predicate(high):
            low, high = high, high + 2.0
        nc = Helpers.bisect_predicate(predicate, low, high, NUMERICS["fock_nc_tolerance"])
        logger.info(f"N_c({n}) = {nc:.5f}")
        return nc

    @staticmethod
    def fock_extrema(n, bath):
        """Γt of the stationary points of S_n(t) found on the scan grid"""
        if n == 1:
            return FockRelaxation.fock1_extrema(bath)
        grid = np.linspace(0.0, NUMERICS["fock_scan_horizon"], NUMERICS["fock_scan_points"] + 1)[1:]
        rates = FockRelaxation.entropy_fock_rate(n, bath, grid)
        brackets = Helpers.sign_change_brackets(rates, grid)
        return Helpers.refine_roots(lambda gt: FockRelaxation.entropy_fock_rate(n, bath, gt), brackets)

    @staticmethod
    def classify_fock_phase(n, bath):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"Fock phase classification needs n >= 1, got {n!r}")
        if bath.n_beta >= FockRelaxation.fock_critical_nc(n):
            return RelaxationPhase(PhaseTag.MONOTONE_FROM_BELOW)

        times = FockRelaxation.fock_extrema(n, bath)
        if bath.n_beta <= n:
            if not times:
                logger.warning(f"No maximum resolved for n={n}, N_β={bath.n_beta}")
                return RelaxationPhase(PhaseTag.MONOTONE_FROM_BELOW)
            return RelaxationPhase(PhaseTag.SINGLE_HUMP, times[:1])
        if not times:
            # within the bisection tolerance of N_c the two extrema have merged
            return RelaxationPhase(PhaseTag.MONOTONE_FROM_BELOW)
        if len(times) == 1:
            # the minimum lies beyond the scan horizon
            times = [times[0], math.inf]
        return RelaxationPhase(PhaseTag.DOUBLE_EXTREMUM, times[:2])

    @staticmethod
    def mean_number(n, bath, gt):
        x = np.exp(-2.0 * FockRelaxation._check_time(gt))
        return (bath.n_beta + (n - bath.n_beta) * x)[()]

    @staticmethod
    def number_second_moment(n, bath, gt):
        """<(a†a)²>_t"""
        x = np.exp(-2.0 * FockRelaxation._check_time(gt))
        nb = bath.n_beta
        return (
            nb * (2.0 * nb + 1.0)
            + (4.0 * nb * (n - nb) + n - nb) * x
            + (2.0 * nb * (nb - 2.0 * n) + n * (n - 1.0)) * x ** 2
        )[()]

    @staticmethod
    def energy_variance_fock(n, bath, gt):
        x = np.exp(-2.0 * FockRelaxation._check_time(gt))
        nb = bath.n_beta
        return ((1.0 - x) * (nb * (1.0 + nb) - x * (nb ** 2 - 2.0 * n * nb - n)))[()]

    @staticmethod
    def energy_variance_peak(n, bath):
        """(Γt_m, peak value) of the energy variance hump, or None when N_β >= n"""
        nb = bath.n_beta
        if nb >= n:
            return None
        k_factor = bath.coth_factor
        gt_peak = 0.5 * math.log1p((n * k_factor + nb) / ((n - nb) * k_factor))
        peak = (n * k_factor + nb) ** 2 / (4.0 * (n * k_factor - nb ** 2))
        return gt_peak, peak
