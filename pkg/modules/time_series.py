import logging

import numpy as np
import pandas as pd

from modules.classical_relaxation import ClassicalRelaxation
from modules.fock_relaxation import FockRelaxation
from modules.gaussian_relaxation import GaussianRelaxation
from modules.lindblad_oracle import LindbladOracle
from modules.model import OscillatorParams
from modules.photon_distribution import PhotonDistribution

logger = logging.getLogger(__name__)


class TimeSeriesBuilder:
    """Tabulates the analytic observables of a run on its Γt grid"""

    def __init__(self, config):
        self.config = config
        self.params = config.oscillator()
        self.baths = config.baths()
        self.gt = config.gt_values()

    @staticmethod
    def gaussian_label(state, bath):
        label = f"gaussian r={state.squeeze_r:g}"
        if state.q_bar or state.p_bar:
            label += f" q={state.q_bar:g} p={state.p_bar:g}"
        return f"{label} nbeta={bath.n_beta:g}"

    @staticmethod
    def fock_label(n, bath):
        return f"fock n={n} nbeta={bath.n_beta:g}"

    def _gaussian_states(self):
        # a Fock-only run carries no implicit Gaussian series
        if self.config.fock and not self.config.gaussian:
            return []
        return self.config.gaussian_states()

    def _oracle_frame(self, rho0):
        oracle = LindbladOracle(self.config.truncation)
        grid = self.config.time_grid(self.params)
        frames = []
        for bath in self.baths:
            states = oracle.evolve(rho0(oracle), self.params, bath, grid)
            frames.append(oracle.trajectory_frame(grid, states, self.params))
        return frames

    def entropy_series(self):
        """Columns series, gt, S, R with R = dS/d(Γt)"""
        frames = []
        states = self._gaussian_states()
        for state in states:
            oracle_frames = None
            if self.config.oracle:
                oracle_frames = self._oracle_frame(lambda oracle: oracle.prepare_gaussian(state, self.params.omega))
            for index, bath in enumerate(self.baths):
                frame = pd.DataFrame({
                    "series": self.gaussian_label(state, bath),
                    "gt": self.gt,
                    "S": GaussianRelaxation.entropy_gaussian(bath, state.squeeze_r, self.gt),
                    "R": GaussianRelaxation.entropy_rate(bath, state.squeeze_r, self.gt),
                })
                if oracle_frames is not None:
                    frame["S_oracle"] = oracle_frames[index]["entropy"].to_numpy()
                frames.append(frame)
                phase = GaussianRelaxation.classify_gaussian_phase(bath, state.squeeze_r)
                logger.info(f"{frame['series'].iloc[0]}: {phase.tag.value}")

        for n in self.config.fock:
            oracle_frames = None
            if self.config.oracle:
                oracle_frames = self._oracle_frame(lambda oracle: oracle.prepare_fock(n))
            for index, bath in enumerate(self.baths):
                frame = pd.DataFrame({
                    "series": self.fock_label(n, bath),
                    "gt": self.gt,
                    "S": FockRelaxation.entropy_fock(n, bath, self.gt),
                    "R": FockRelaxation.entropy_fock_rate(n, bath, self.gt),
                })
                if oracle_frames is not None:
                    frame["S_oracle"] = oracle_frames[index]["entropy"].to_numpy()
                frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def q_variance_series(self):
        """Normalized position variance V = V1 + V2 of Gaussian states"""
        frames = []
        times = self.gt / self.params.gamma_damp
        for state in self.config.gaussian_states():
            extrema = GaussianRelaxation.v2_extrema(state.squeeze_r, self.params.damping_ratio, self.config.gt_max)
            logger.info(
                f"V2 for r={state.squeeze_r:g}, γ={self.params.damping_ratio:g}: {len(extrema)} extrema "
                f"(γ_c = {GaussianRelaxation.critical_gamma(state.squeeze_r):.4f})"
            )
            for bath in self.baths:
                total, thermal, squeezed = GaussianRelaxation.q_variance(self.params, state, bath, times)
                frames.append(pd.DataFrame({
                    "series": self.gaussian_label(state, bath),
                    "gt": self.gt,
                    "V": total,
                    "V1": thermal,
                    "V2": squeezed,
                }))
        return pd.concat(frames, ignore_index=True)

    def energy_variance_series(self):
        """<a†a> and its variance for Fock states, or Gaussian states when no Fock state is given"""
        frames = []
        for n in self.config.fock:
            oracle_frames = None
            if self.config.oracle:
                oracle_frames = self._oracle_frame(lambda oracle: oracle.prepare_fock(n))
            for index, bath in enumerate(self.baths):
                frame = pd.DataFrame({
                    "series": self.fock_label(n, bath),
                    "gt": self.gt,
                    "mean_n": FockRelaxation.mean_number(n, bath, self.gt),
                    "var_E": FockRelaxation.energy_variance_fock(n, bath, self.gt),
                })
                if oracle_frames is not None:
                    frame["var_E_oracle"] = oracle_frames[index]["var_energy"].to_numpy()
                peak = FockRelaxation.energy_variance_peak(n, bath)
                if peak is not None:
                    logger.info(f"{frame['series'].iloc[0]}: peak {peak[1]:.4f} at Γt = {peak[0]:.4f}")
                frames.append(frame)

        times = self.gt / self.params.gamma_damp
        for state in self._gaussian_states():
            for bath in self.baths:
                mean_n, var_n = GaussianRelaxation.number_moments(self.params, state, bath, times)
                frames.append(pd.DataFrame({
                    "series": self.gaussian_label(state, bath),
                    "gt": self.gt,
                    "mean_n": mean_n,
                    "var_E": var_n,
                }))
        return pd.concat(frames, ignore_index=True)

    def classical_variance_series(self):
        """Vq and V(t) = <(ΔE)²>/(k_B T)² for a particle launched from q = 0 with energy λ k_B T"""
        frames = []
        ratio = self.config.energy_ratio
        for alpha in self.config.alpha:
            params = OscillatorParams.from_alpha(alpha)
            frames.append(pd.DataFrame({
                "series": f"classical alpha={alpha} lambda={ratio:g}",
                "gt": self.gt,
                "Vq": ClassicalRelaxation.normalized_q_variance(params, 1.0, self.gt / params.gamma_damp),
                "V": ClassicalRelaxation.energy_variance_curve(alpha, ratio, self.gt),
            }))
        return pd.concat(frames, ignore_index=True)

    def photon_series(self):
        """Long table of P(n, t) with the normalization residual of each time slice"""
        frames = []
        n_max = self.config.photon_n_max
        for state in self.config.gaussian_states():
            for bath in self.baths:
                cutoff = PhotonDistribution.normalization_cutoff(state, bath, self.gt, self.params.omega)
                populations = PhotonDistribution.distribution(
                    state, bath, self.gt, max(cutoff, n_max), self.params.omega
                )
                residual = populations.sum(axis=0) - 1.0
                label = self.gaussian_label(state, bath)
                for n in range(n_max + 1):
                    frames.append(pd.DataFrame({
                        "series": label,
                        "gt": self.gt,
                        "n": n,
                        "P": populations[n],
                        "norm_residual": residual,
                    }))
                extremum = PhotonDistribution.p0_extremum_time(bath, state.squeeze_r)
                if extremum is not None:
                    logger.info(f"{label}: P(0, t) has its extremum at Γt = {extremum:.4f}")
        frame = pd.concat(frames, ignore_index=True)
        return frame.sort_values(["series", "gt", "n"], kind="stable").reset_index(drop=True)

    def classical_entropy_series(self):
        """Fine-grained S, coarse-grained S_c and its rate R_c"""
        frames = []
        for alpha in self.config.alpha:
            params = OscillatorParams.from_alpha(alpha)
            times = self.gt / params.gamma_damp
            fine = np.full(self.gt.shape, np.nan)
            positive = self.gt > 0
            fine[positive] = ClassicalRelaxation.classical_entropy(params, times[positive])
            frames.append(pd.DataFrame({
                "series": f"classical alpha={alpha}",
                "gt": self.gt,
                "S": fine,
                "S_c": ClassicalRelaxation.coarse_grained_entropy_canonical(params, times),
                "R_c": ClassicalRelaxation.coarse_grained_entropy_rate(params, times),
            }))
        return pd.concat(frames, ignore_index=True)
