import logging

import numpy as np
from scipy.optimize import brentq

from config.constants import NUMERICS

logger = logging.getLogger(__name__)


class ImaginaryResidueError(ArithmeticError):
    """A quantity that must be real carried a non-negligible imaginary part."""


class NegativeProbabilityError(ArithmeticError):
    """A probability fell below zero beyond the numerical tolerance."""


class TruncationError(RuntimeError):
    """The truncated Fock basis no longer represents the state faithfully."""


class Helpers:
    @staticmethod
    def finite_difference_rate(values, grid):
        """Second-order finite-difference derivative of sampled values"""
        return np.gradient(np.asarray(values, dtype=float), np.asarray(grid, dtype=float))

    @staticmethod
    def _significant_signs(values, floor):
        values = np.asarray(values, dtype=float)
        mask = np.abs(values) > floor
        return np.sign(values[mask]), np.flatnonzero(mask)

    @staticmethod
    def count_sign_changes(values, floor=None):
        """Count sign flips, ignoring entries whose magnitude is below the floor"""
        if floor is None:
            floor = NUMERICS["sign_change_floor"]
        signs, _ = Helpers._significant_signs(values, floor)
        if signs.size < 2:
            return 0
        return int(np.count_nonzero(signs[1:] != signs[:-1]))

    @staticmethod
    def sign_change_brackets(values, grid, floor=None):
        """Return (left, right) grid intervals that enclose each sign flip"""
        if floor is None:
            floor = NUMERICS["sign_change_floor"]
        grid = np.asarray(grid, dtype=float)
        signs, index = Helpers._significant_signs(values, floor)
        flips = np.flatnonzero(signs[1:] != signs[:-1])
        return [(grid[index[k]], grid[index[k + 1]]) for k in flips]

    @staticmethod
    def refine_roots(func, brackets, xtol=1e-12):
        """Polish bracketed roots of func with Brent's method"""
        roots = []
        for left, right in brackets:
            f_left, f_right = func(left), func(right)
            if f_left == 0.0:
                roots.append(left)
            elif f_left * f_right > 0:
                # the flip was produced by finite-difference noise
                roots.append(0.5 * (left + right))
                logger.warning(f"Unbracketed sign change in [{left:.6g}, {right:.6g}], using midpoint")
            else:
                roots.append(brentq(func, left, right, xtol=xtol))
        return roots

    @staticmethod
    def bisect_predicate(predicate, low, high, tol, max_iterations=200):
        """
        Locate the switch point of a boolean predicate on [low, high].

        The predicate must differ at the two ends; the returned value is the
        midpoint of the final interval whose ends still disagree.
        """
        at_low = predicate(low)
        if at_low == predicate(high):
            raise ValueError(
                f"Predicate must differ at the interval ends, got {at_low} at both {low} and {high}"
            )
        iterations = 0
        while (high - low) > tol and iterations < max_iterations:
            middle = 0.5 * (low + high)
            if predicate(middle) == at_low:
                low = middle
            else:
                high = middle
            iterations += 1
        return 0.5 * (low + high)

    @staticmethod
    def parse_complex(text):
        """Parse '2i', '-0.5i', '0.2' or '1+2i' into a complex number"""
        if isinstance(text, (int, float, complex)):
            return complex(text)
        cleaned = str(text).strip().replace(" ", "").replace("i", "j")
        if cleaned in ("j", "+j", "-j"):
            cleaned = cleaned.replace("j", "1j")
        try:
            return complex(cleaned)
        except ValueError:
            raise ValueError(f"Cannot parse complex value: {text!r}")
