import logging
import math
import numbers

import numpy as np
from scipy.special import gamma as gamma_fn

from config.constants import NUMERICS
from utils.helpers import ImaginaryResidueError

logger = logging.getLogger(__name__)


class SpecialFunctions:
    """
    Polynomial and hypergeometric kernels shared by the analytic modules.

    Hermite evaluations use exact three-term recurrences, so they accept real
    or complex scalars and numpy arrays alike. Degrees are not capped here;
    callers bound the quantum numbers they feed in.
    """

    @staticmethod
    def _check_degree(n):
        if not isinstance(n, numbers.Integral) or n < 0:
            raise ValueError(f"Degree must be a non-negative integer, got {n!r}")

    @staticmethod
    def hermite(n, x):
        """Physicists' Hermite polynomial H_n(x)"""
        SpecialFunctions._check_degree(n)
        x = np.asarray(x)
        previous = np.ones_like(x, dtype=np.result_type(x, float))
        if n == 0:
            return previous[()]
        current = 2 * x * previous
        for k in range(1, n):
            previous, current = current, 2 * x * current - 2 * k * previous
        return current[()]

    @staticmethod
    def scaled_hermite(n, s, y):
        """
        G_n(s, y) = s^{n/2} H_n(y / sqrt(s)), written as a polynomial in s and y.

        The recurrence G_{k+1} = 2y G_k - 2k s G_{k-1} never divides by s,
        so s = 0 and negative s need no special handling.
        """
        return SpecialFunctions.scaled_hermite_table(n, s, y)[n][()]

    @staticmethod
    def scaled_hermite_table(n_max, s, y, normalized=False):
        """
        [G_0, ..., G_n_max] on the broadcast shape of s and y.

        With normalized=True the entries are G_k / sqrt(2^k k!), which obey
        g_{k+1} = sqrt(2/(k+1)) y g_k - sqrt(k/(k+1)) s g_{k-1} and stay
        bounded for |s| <= 1, so high degrees neither overflow nor underflow.
        """
        SpecialFunctions._check_degree(n_max)
        s, y = np.broadcast_arrays(np.asarray(s), np.asarray(y))
        table = [np.ones(y.shape, dtype=np.result_type(s, y, float))]
        if n_max == 0:
            return table
        table.append((np.sqrt(2.0) if normalized else 2.0) * y * table[0])
        for k in range(1, n_max):
            if normalized:
                following = math.sqrt(2.0 / (k + 1)) * y * table[k] - math.sqrt(k / (k + 1)) * s * table[k - 1]
            else:
                following = 2 * y * table[k] - 2 * k * s * table[k - 1]
            table.append(following)
        return table

    @staticmethod
    def hyp2f1_coefficients(m1, m2, c):
        """Series coefficients (-2m1)_k (-2m2)_k / ((c)_k k!) of the terminating 2F1"""
        SpecialFunctions._check_degree(m1)
        SpecialFunctions._check_degree(m2)
        if c <= 0 and float(c).is_integer():
            raise ValueError(f"Lower parameter c={c} is a non-positive integer; the series is undefined")
        upper_a, upper_b = -2 * m1, -2 * m2
        terms = min(2 * m1, 2 * m2) + 1
        coefficients = np.empty(terms)
        coefficients[0] = 1.0
        for k in range(terms - 1):
            coefficients[k + 1] = coefficients[k] * (upper_a + k) * (upper_b + k) / ((c + k) * (k + 1))
        return coefficients

    @staticmethod
    def hyp2f1_terminating(m1, m2, c, z):
        """2F1(-2m1, -2m2; c; z) summed until the series terminates"""
        coefficients = SpecialFunctions.hyp2f1_coefficients(m1, m2, c)
        z = np.asarray(z, dtype=float)
        total = np.zeros_like(z)
        power = np.ones_like(z)
        for coefficient in coefficients:
            total = total + coefficient * power
            power = power * z
        return total[()]

    @staticmethod
    def gamma_half(k):
        """Γ(k + 1/2) for a non-negative integer k"""
        SpecialFunctions._check_degree(k)
        return float(gamma_fn(k + 0.5))

    @staticmethod
    def to_real(value, context="value", tolerance=None):
        """Drop the imaginary part of a provably real result after checking it is negligible"""
        if tolerance is None:
            tolerance = NUMERICS["imag_tolerance"]
        value = np.asarray(value)
        if not np.iscomplexobj(value):
            return value.astype(float)[()]
        residue = np.abs(value.imag)
        bound = tolerance * (1.0 + np.abs(value.real))
        if np.any(residue > bound):
            worst = float(np.max(residue))
            logger.error(f"Imaginary residue {worst:.3e} in {context}")
            raise ImaginaryResidueError(f"{context} has imaginary residue {worst:.3e}")
        return value.real.astype(float)[()]
