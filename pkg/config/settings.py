"""
Run configuration for the command-line surface.

A RunConfig is assembled from, in increasing precedence, DEFAULT_RUN, a JSON
run file and command-line flags. Flags that were not given stay None on the
argparse namespace and never override the run file.
"""
import logging
import math
import os
from dataclasses import dataclass, field, fields
from typing import List, Optional

import numpy as np

from config.constants import DEFAULT_RUN, ORACLE_SETTINGS, SUPPORTED_RANGES, TRUNCATION_ENV, VERIFY_SETS
from modules.model import (
    FockInitialState,
    GaussianInitialState,
    OscillatorParams,
    ThermalBath,
    TimeGrid,
    UnitConversions,
)
from utils.file_processing import FileProcessor

logger = logging.getLogger(__name__)

COMMANDS = ("entropy", "variance", "phase", "photon", "classical-entropy", "verify")
VARIANCE_MODES = ("q", "energy", "classical")


def default_truncation():
    raw = os.environ.get(TRUNCATION_ENV)
    if raw is None:
        return ORACLE_SETTINGS["default_truncation"]
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{TRUNCATION_ENV} must be an integer, got {raw!r}")


@dataclass
class RunConfig:
    command: str
    omega: float = DEFAULT_RUN["omega"]
    gamma_damp: float = DEFAULT_RUN["gamma_damp"]
    n_beta: List[float] = field(default_factory=list)
    temperature: Optional[float] = None
    gaussian: List[GaussianInitialState] = field(default_factory=list)
    fock: List[int] = field(default_factory=list)
    variance_mode: str = DEFAULT_RUN["variance_mode"]
    gamma_ratio: Optional[float] = None
    alpha: List[str] = field(default_factory=lambda: [DEFAULT_RUN["alpha"]])
    energy_ratio: float = DEFAULT_RUN["energy_ratio"]
    gt_max: float = DEFAULT_RUN["gt_max"]
    points: int = DEFAULT_RUN["points"]
    photon_n_max: int = DEFAULT_RUN["photon_n_max"]
    phase_points: int = DEFAULT_RUN["phase_points"]
    out: Optional[str] = None
    oracle: bool = False
    truncation: int = field(default_factory=default_truncation)
    suites: List[str] = field(default_factory=lambda: list(VERIFY_SETS))

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}; choose one of {', '.join(COMMANDS)}")
        if self.variance_mode not in VARIANCE_MODES:
            raise ValueError(f"Variance mode must be one of {VARIANCE_MODES}, got {self.variance_mode!r}")
        if not (self.gt_max > 0 and math.isfinite(self.gt_max)):
            raise ValueError(f"gt_max must be positive, got {self.gt_max}")
        if not isinstance(self.points, int) or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points!r}")
        if not 0 <= self.photon_n_max <= SUPPORTED_RANGES["max_photon_n"]:
            raise ValueError(
                f"photon_n_max must lie in [0, {SUPPORTED_RANGES['max_photon_n']}], got {self.photon_n_max}"
            )
        if not SUPPORTED_RANGES["min_truncation"] <= self.truncation <= SUPPORTED_RANGES["max_truncation"]:
            raise ValueError(
                f"Truncation must lie in [{SUPPORTED_RANGES['min_truncation']}, "
                f"{SUPPORTED_RANGES['max_truncation']}], got {self.truncation}"
            )
        if self.gamma_ratio is not None and not self.gamma_ratio > 0:
            raise ValueError(f"gamma_ratio must be positive, got {self.gamma_ratio}")
        if not self.energy_ratio > 0:
            raise ValueError(f"The energy ratio λ must be positive, got {self.energy_ratio}")
        unknown = sorted(set(self.suites) - set(VERIFY_SETS))
        if unknown:
            raise ValueError(f"Unknown verification suites {unknown}; choose from {list(VERIFY_SETS)}")
        # construct once so that invalid values fail here rather than mid-run
        self.oscillator()
        self.baths()
        for n in self.fock:
            FockInitialState(n)
        for alpha in self.alpha:
            OscillatorParams.from_alpha(alpha)
        return self

    def oscillator(self):
        gamma_damp = self.gamma_damp if self.gamma_ratio is None else self.gamma_ratio * self.omega
        return OscillatorParams(omega=self.omega, gamma_damp=gamma_damp)

    def baths(self):
        if self.temperature is not None:
            return [UnitConversions.n_beta_from_temperature(self.omega, self.temperature)]
        return [ThermalBath(float(nb)) for nb in (self.n_beta or DEFAULT_RUN["n_beta"])]

    def baths_given(self):
        """True when the run names its bath through N_β values or a temperature"""
        return bool(self.n_beta) or self.temperature is not None

    def gt_values(self):
        return np.linspace(0.0, self.gt_max, self.points)

    def time_grid(self, params=None):
        params = params or self.oscillator()
        return TimeGrid.from_gamma_span(self.gt_max, self.points, params.gamma_damp)

    def gaussian_states(self):
        if self.gaussian:
            return list(self.gaussian)
        return [GaussianInitialState(squeeze_r=DEFAULT_RUN["squeeze_r"])]


class SettingsLoader:
    @staticmethod
    def parse_gaussian_spec(spec):
        """
        Parse 'r=2', 'r=1,q=1,p=0.5' or 'r=1,a1=0.5,a2=0' into a GaussianInitialState.

        The a1/a2 form gives the initial amplitude <a> = a1 + i a2 at ω = 1.
        """
        if isinstance(spec, GaussianInitialState):
            return spec
        if isinstance(spec, dict):
            values = {str(key): float(value) for key, value in spec.items()}
        else:
            values = {}
            for item in str(spec).split(","):
                if not item.strip():
                    continue
                if "=" not in item:
                    raise ValueError(f"Gaussian state entries must look like key=value, got {item!r}")
                key, value = item.split("=", 1)
                try:
                    values[key.strip()] = float(value)
                except ValueError:
                    raise ValueError(f"Gaussian state value for {key.strip()!r} is not a number: {value!r}")
        unknown = sorted(set(values) - {"r", "q", "p", "a1", "a2"})
        if unknown:
            raise ValueError(f"Unknown Gaussian state keys {unknown}; use r, q, p or a1, a2")
        if ("a1" in values or "a2" in values) and ("q" in values or "p" in values):
            raise ValueError("Give the initial mean either as q/p or as a1/a2, not both")
        squeeze_r = values.get("r", 0.0)
        if "a1" in values or "a2" in values:
            return GaussianInitialState.from_amplitude(values.get("a1", 0.0), values.get("a2", 0.0), squeeze_r)
        return GaussianInitialState(q_bar=values.get("q", 0.0), p_bar=values.get("p", 0.0), squeeze_r=squeeze_r)

    @staticmethod
    def parse_fock_spec(spec):
        """Parse 'n=3', '3' or 3"""
        text = str(spec).strip()
        if text.startswith("n="):
            text = text[2:]
        try:
            n = int(text)
        except ValueError:
            raise ValueError(f"Fock state must be an integer quantum number, got {spec!r}")
        FockInitialState(n)
        return n

    @staticmethod
    def from_mapping(data):
        """Normalize a run-file mapping into RunConfig keyword arguments"""
        known = {f.name for f in fields(RunConfig)}
        values = {}
        for key, value in data.items():
            name = key.replace("-", "_")
            if name == "lambda":
                name = "energy_ratio"
            if name not in known:
                raise ValueError(f"Unknown run-file key {key!r}")
            values[name] = value

        if "n_beta" in values and not isinstance(values["n_beta"], list):
            values["n_beta"] = [values["n_beta"]]
        if "gaussian" in values:
            specs = values["gaussian"] if isinstance(values["gaussian"], list) else [values["gaussian"]]
            values["gaussian"] = [SettingsLoader.parse_gaussian_spec(spec) for spec in specs]
        if "fock" in values:
            specs = values["fock"] if isinstance(values["fock"], list) else [values["fock"]]
            values["fock"] = [SettingsLoader.parse_fock_spec(spec) for spec in specs]
        if "alpha" in values:
            specs = values["alpha"] if isinstance(values["alpha"], list) else [values["alpha"]]
            values["alpha"] = [str(spec) for spec in specs]
        if "suites" in values and not isinstance(values["suites"], list):
            values["suites"] = [values["suites"]]
        return values

    @staticmethod
    def from_arguments(args):
        """RunConfig keyword arguments for every flag that was actually given"""
        values = {}
        simple = {
            "omega": "omega",
            "gamma": "gamma_damp",
            "nbeta": "n_beta",
            "temperature": "temperature",
            "gamma_ratio": "gamma_ratio",
            "energy_ratio": "energy_ratio",
            "gt_max": "gt_max",
            "points": "points",
            "photon_n_max": "photon_n_max",
            "phase_points": "phase_points",
            "out": "out",
            "truncation": "truncation",
            "suite": "suites",
        }
        for flag, name in simple.items():
            value = getattr(args, flag, None)
            if value is not None:
                values[name] = value
        if getattr(args, "gaussian", None):
            values["gaussian"] = [SettingsLoader.parse_gaussian_spec(spec) for spec in args.gaussian]
        if getattr(args, "fock", None):
            values["fock"] = [SettingsLoader.parse_fock_spec(spec) for spec in args.fock]
        if getattr(args, "alpha", None):
            values["alpha"] = [str(spec) for spec in args.alpha]
        if getattr(args, "variance_mode", None):
            values["variance_mode"] = args.variance_mode
        if getattr(args, "oracle", False):
            values["oracle"] = True
        return values

    @staticmethod
    def build(args):
        values = {}
        if getattr(args, "config", None):
            data = FileProcessor.read_run_file(args.config)
            file_command = data.pop("command", None)
            if file_command is not None and file_command != args.command:
                logger.warning(f"Run file is written for '{file_command}', running '{args.command}'")
            values.update(SettingsLoader.from_mapping(data))
        values.update(SettingsLoader.from_arguments(args))
        config = RunConfig(command=args.command, **values)
        logger.debug(f"Run configuration: {config}")
        return config
