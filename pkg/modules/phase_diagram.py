import logging
import math

import numpy as np

from config.constants import NUMERICS
from modules.fock_relaxation import FockRelaxation
from modules.gaussian_relaxation import GaussianRelaxation
from modules.model import ThermalBath, UnitConversions
from utils.helpers import Helpers

logger = logging.getLogger(__name__)


class PhaseDiagram:
    """
    Phase tables over N_β for one initial state.

    Each row carries the analytic classification and, as a cross-check, the
    number of sign changes of a finite-difference entropy rate on a fixed grid.
    """

    @staticmethod
    def default_n_beta_grid(upper, points):
        """Cell midpoints on (0, upper)"""
        return (np.arange(points) + 0.5) * upper / points

    @staticmethod
    def count_entropy_extrema(entropy):
        grid = np.linspace(0.0, NUMERICS["phase_scan_horizon"], NUMERICS["phase_scan_points"] + 1)[1:]
        rates = Helpers.finite_difference_rate(entropy(grid), grid)
        return Helpers.count_sign_changes(rates)

    @staticmethod
    def _row(n_beta, phase, grid_extrema, **extra):
        expected = sum(1 for t in phase.extremum_times if math.isfinite(t))
        row = {"n_beta": float(n_beta)}
        row.update(phase.to_dict())
        row.update(extra)
        row["grid_extrema"] = grid_extrema
        row["consistent"] = grid_extrema == expected
        return row

    @staticmethod
    def gaussian_table(squeeze_r, n_betas, omega=1.0):
        rows = []
        for n_beta in n_betas:
            bath = ThermalBath(float(n_beta))
            phase = GaussianRelaxation.classify_gaussian_phase(bath, squeeze_r)
            grid_extrema = PhaseDiagram.count_entropy_extrema(
                lambda gt: GaussianRelaxation.entropy_gaussian(bath, squeeze_r, gt)
            )
            rows.append(PhaseDiagram._row(
                n_beta, phase, grid_extrema, entropy_max=GaussianRelaxation.entropy_max(bath, squeeze_r)
            ))

        critical_temperature = None
        if squeeze_r != 0:
            critical_temperature = UnitConversions.critical_temperature_gaussian(omega, squeeze_r)
        mismatches = sum(1 for row in rows if not row["consistent"])
        if mismatches:
            logger.warning(f"{mismatches} grid points disagree with the analytic Gaussian phase for r={squeeze_r}")
        return {
            "kind": "gaussian",
            "squeeze_r": squeeze_r,
            "critical_n_beta": math.sinh(squeeze_r) ** 2,
            "critical_gamma": GaussianRelaxation.critical_gamma(squeeze_r),
            "critical_temperature": critical_temperature,
            "rows": rows,
        }

    @staticmethod
    def fock_table(n, n_betas, omega=1.0):
        upper = FockRelaxation.fock_critical_nc(n)
        rows = []
        for n_beta in n_betas:
            bath = ThermalBath(float(n_beta))
            phase = FockRelaxation.classify_fock_phase(n, bath)
            grid_extrema = PhaseDiagram.count_entropy_extrema(lambda gt: FockRelaxation.entropy_fock(n, bath, gt))
            rows.append(PhaseDiagram._row(n_beta, phase, grid_extrema))

        mismatches = sum(1 for row in rows if not row["consistent"])
        if mismatches:
            logger.warning(f"{mismatches} grid points disagree with the analytic Fock phase for n={n}")
        return {
            "kind": "fock",
            "n": n,
            "boundaries": {"lower": float(n), "upper": upper, "offset": upper - n},
            "critical_temperatures": {
                "lower": UnitConversions.temperature_from_n_beta(omega, n),
                "upper": UnitConversions.temperature_from_n_beta(omega, upper),
            },
            "rows": rows,
        }

    @staticmethod
    def from_config(config):
        """One table per requested initial state"""
        omega = config.omega
        explicit = [bath.n_beta for bath in config.baths()] if config.baths_given() else None
        tables = []
        states = [] if (config.fock and not config.gaussian) else config.gaussian_states()
        for state in states:
            n_betas = explicit
            if n_betas is None:
                # with upper = 2.5 sinh²r no midpoint lands on the tie N_β = sinh²r
                upper = max(2.5 * math.sinh(state.squeeze_r) ** 2, 1.0)
                n_betas = PhaseDiagram.default_n_beta_grid(upper, config.phase_points)
            tables.append(PhaseDiagram.gaussian_table(state.squeeze_r, n_betas, omega))
        for n in config.fock:
            n_betas = explicit
            if n_betas is None:
                n_betas = PhaseDiagram.default_n_beta_grid(FockRelaxation.fock_critical_nc(n) + 1.0, config.phase_points)
            tables.append(PhaseDiagram.fock_table(n, n_betas, omega))
        return {"tables": tables}
