"""
Shared parameter and state types.

Natural units hbar = M = k_B = 1 are used everywhere, so the coherent-state
width is sigma_c^2 = 1 / (2 omega) and temperatures are energies.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from config.constants import SUPPORTED_RANGES
from utils.helpers import Helpers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OscillatorParams:
    omega: float
    gamma_damp: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not (self.gamma_damp > 0 and math.isfinite(self.gamma_damp)):
            raise ValueError(f"gamma_damp must be positive, got {self.gamma_damp}")

    @property
    def damping_ratio(self):
        """γ = Γ/ω"""
        return self.gamma_damp / self.omega

    @property
    def sigma_c2(self):
        return 1.0 / (2.0 * self.omega)

    @classmethod
    def from_alpha(cls, alpha, gamma_damp=1.0):
        """Build params from the classical damping parameter α = sqrt(1 - 4ω²/Γ²)"""
        alpha2 = Helpers.parse_complex(alpha) ** 2
        if abs(alpha2.imag) > 1e-12 or alpha2.real >= 1.0:
            raise ValueError(f"alpha must be real in [0, 1) or purely imaginary, got {alpha}")
        omega = 0.5 * gamma_damp * math.sqrt(1.0 - alpha2.real)
        return cls(omega=omega, gamma_damp=gamma_damp)


@dataclass(frozen=True)
class ThermalBath:
    n_beta: float

    def __post_init__(self):
        if not (self.n_beta >= 0 and math.isfinite(self.n_beta)):
            raise ValueError(f"n_beta must be a finite non-negative number, got {self.n_beta}")

    @property
    def coth_factor(self):
        """2N_β + 1"""
        return 2.0 * self.n_beta + 1.0

    @property
    def equilibrium_entropy(self):
        return math.log1p(2.0 * self.n_beta)


@dataclass(frozen=True)
class GaussianInitialState:
    q_bar: float = 0.0
    p_bar: float = 0.0
    squeeze_r: float = 0.0

    def sigma2(self, omega):
        """Initial position variance σ² = σ_c² e^{-2r}"""
        return math.exp(-2.0 * self.squeeze_r) / (2.0 * omega)

    def coherent_amplitude(self, omega):
        """(α₁, α₂) with ⟨a⟩ = α₁ + iα₂ at t = 0"""
        sigma_c = math.sqrt(1.0 / (2.0 * omega))
        return self.q_bar / (2.0 * sigma_c), sigma_c * self.p_bar

    @classmethod
    def from_amplitude(cls, alpha1, alpha2, squeeze_r, omega=1.0):
        sigma_c = math.sqrt(1.0 / (2.0 * omega))
        return cls(q_bar=2.0 * sigma_c * alpha1, p_bar=alpha2 / sigma_c, squeeze_r=squeeze_r)


@dataclass(frozen=True)
class FockInitialState:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not 0 <= self.n <= SUPPORTED_RANGES["max_fock_n"]:
            raise ValueError(
                f"Fock quantum number must be an integer in [0, {SUPPORTED_RANGES['max_fock_n']}], got {self.n!r}"
            )


@dataclass(frozen=True)
class TimeGrid:
    times: tuple = field(default_factory=tuple)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("TimeGrid needs a non-empty one-dimensional sequence of times")
        if not np.all(np.isfinite(times)) or times[0] < 0:
            raise ValueError("TimeGrid times must be finite and start at t >= 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("TimeGrid times must be strictly increasing")
        object.__setattr__(self, "times", tuple(float(t) for t in times))

    @classmethod
    def from_gamma_span(cls, gt_max, points, gamma_damp, gt_min=0.0):
        """Evenly spaced physical times covering Γt in [gt_min, gt_max]"""
        if points < 1:
            raise ValueError(f"points must be positive, got {points}")
        return cls(tuple(np.linspace(gt_min, gt_max, points) / gamma_damp))

    def as_array(self):
        return np.asarray(self.times)

    def __len__(self):
        return len(self.times)


class PhaseTag(str, Enum):
    MONOTONE_FROM_BELOW = "MonotoneFromBelow"
    SINGLE_HUMP = "SingleHump"
    DOUBLE_EXTREMUM = "DoubleExtremum"

    @property
    def extremum_count(self):
        return {"MonotoneFromBelow": 0, "SingleHump": 1, "DoubleExtremum": 2}[self.value]


@dataclass(frozen=True)
class RelaxationPhase:
    """
    Shape class of an entropy time curve.

    extremum_times are in units of 1/Γ. An extremum pushed beyond numerical
    resolution (the far minimum just above the lower Fock boundary) is
    reported as math.inf.
    """
    tag: PhaseTag
    extremum_times: tuple = ()

    def __post_init__(self):
        times = tuple(float(t) for t in self.extremum_times)
        if len(times) != self.tag.extremum_count:
            raise ValueError(f"{self.tag.value} needs {self.tag.extremum_count} extremum times, got {len(times)}")
        if any(t <= 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"Extremum times must be positive and strictly increasing, got {times}")
        object.__setattr__(self, "extremum_times", times)

    def to_dict(self):
        return {"phase": self.tag.value, "extremum_times": list(self.extremum_times)}


class UnitConversions:
    @staticmethod
    def n_beta_from_temperature(omega, temperature):
        """Bose occupation N_β = 1 / (e^{ω/T} - 1); T = 0 gives N_β = 0"""
        if omega <= 0:
            raise ValueError(f"omega must be positive, got {omega}")
        if temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {temperature}")
        if temperature == 0:
            return ThermalBath(0.0)
        ratio = omega / temperature
        # e^{-x} / (1 - e^{-x}) underflows to 0 instead of overflowing for cold baths
        return ThermalBath(math.exp(-ratio) / -math.expm1(-ratio))

    @staticmethod
    def temperature_from_n_beta(omega, n_beta):
        """Inverse of n_beta_from_temperature"""
        if n_beta < 0:
            raise ValueError(f"n_beta must be non-negative, got {n_beta}")
        if n_beta == 0:
            return 0.0
        return omega / math.log1p(1.0 / n_beta)

    @staticmethod
    def critical_temperature_gaussian(omega, squeeze_r):
        """Bath temperature at which N_β equals sinh²r"""
        if squeeze_r == 0:
            raise ValueError("A coherent state (r = 0) has no finite critical temperature")
        return UnitConversions.temperature_from_n_beta(omega, math.sinh(squeeze_r) ** 2)
