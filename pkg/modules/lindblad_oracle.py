"""
Brute-force reference solutions.

LindbladOracle integrates the quantum-optical master equation on a truncated
Fock basis; ClassicalMomentOracle integrates the first and second moments of
the Fokker-Planck equation. Both use fixed-step fourth-order Runge-Kutta so
runs are reproducible bit for bit.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.linalg import expm

from config.constants import ORACLE_SETTINGS, SUPPORTED_RANGES
from utils.helpers import TruncationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LadderOperators:
    lower: np.ndarray
    raising: np.ndarray
    number: np.ndarray

    @property
    def dim(self):
        return self.lower.shape[0]


@dataclass
class DensityMatrix:
    entries: np.ndarray

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def leakage(self):
        """Population of the highest retained level"""
        return float(self.entries[-1, -1].real)

    def validate(self, check_positivity=True):
        rho = self.entries
        hermitian_error = float(np.max(np.abs(rho - rho.conj().T)))
        if hermitian_error > ORACLE_SETTINGS["hermitian_tolerance"]:
            raise ValueError(f"Density matrix is not Hermitian (max deviation {hermitian_error:.3e})")
        trace_error = abs(np.trace(rho).real - 1.0)
        if trace_error > ORACLE_SETTINGS["trace_tolerance"]:
            raise ValueError(f"Density matrix trace deviates from 1 by {trace_error:.3e}")
        if check_positivity:
            lowest = float(np.linalg.eigvalsh(rho)[0])
            if lowest < ORACLE_SETTINGS["eigenvalue_floor"]:
                raise ValueError(f"Density matrix has eigenvalue {lowest:.3e}")
        if self.leakage > ORACLE_SETTINGS["leakage_tolerance"]:
            raise TruncationError(f"Population {self.leakage:.3e} reached the truncation edge n={self.dim - 1}")
        return self


@dataclass(frozen=True)
class OracleObservables:
    purity: float
    entropy: float
    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float
    mean_n: float
    mean_n2: float
    diagonals: np.ndarray

    @property
    def var_energy(self):
        """Variance of E = a†a + 1/2"""
        return self.mean_n2 - self.mean_n ** 2


@dataclass(frozen=True)
class ClassicalMomentState:
    mean: tuple
    cov: np.ndarray

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (2, 2) or not np.allclose(cov, cov.T):
            raise ValueError("Covariance must be a symmetric 2x2 matrix")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", tuple(float(m) for m in self.mean))

    @classmethod
    def localized(cls, q_bar, p_bar):
        return cls((q_bar, p_bar), np.zeros((2, 2)))


class LindbladOracle:
    def __init__(self, n_tr=None, step_scale=None):
        if n_tr is None:
            n_tr = ORACLE_SETTINGS["default_truncation"]
        if step_scale is None:
            step_scale = ORACLE_SETTINGS["step_scale"]
        if not step_scale > 0:
            raise ValueError(f"step_scale must be positive, got {step_scale}")
        if not SUPPORTED_RANGES["min_truncation"] <= n_tr <= SUPPORTED_RANGES["max_truncation"]:
            raise ValueError(
                f"Truncation must lie in [{SUPPORTED_RANGES['min_truncation']}, "
                f"{SUPPORTED_RANGES['max_truncation']}], got {n_tr}"
            )
        self.n_tr = n_tr
        self.step_scale = step_scale
        self.operators = self.build_operators(n_tr)
        self._build_coefficients()

    @staticmethod
    def build_operators(n_tr):
        if n_tr < 2:
            raise ValueError(f"n_tr must be at least 2, got {n_tr}")
        lower = np.diag(np.sqrt(np.arange(1, n_tr, dtype=float)), k=1).astype(complex)
        raising = lower.conj().T
        return LadderOperators(lower=lower, raising=raising, number=raising @ lower)

    def _build_coefficients(self):
        ops = self.operators
        levels = np.arange(self.n_tr, dtype=float)
        ladder = np.diag(ops.lower, k=1).real
        anti = np.diag(ops.lower @ ops.raising).real
        number = np.diag(ops.number).real

        # (aρa†)_mn = l_m l_n ρ_{m+1,n+1} and (a†ρa)_{m+1,n+1} = l_m l_n ρ_mn with l_m = sqrt(m+1)
        self._ladder_product = np.outer(ladder, ladder)
        self._number_sum = number[:, None] + number[None, :]
        self._anti_sum = anti[:, None] + anti[None, :]
        self._detuning = levels[:, None] - levels[None, :]

    def _dissipator(self, rho, bath, gamma_damp):
        emission = np.zeros_like(rho)
        emission[:-1, :-1] = self._ladder_product * rho[1:, 1:]
        absorption = np.zeros_like(rho)
        absorption[1:, 1:] = self._ladder_product * rho[:-1, :-1]
        nb = bath.n_beta
        return gamma_damp * (
            (nb + 1.0) * (2.0 * emission - self._number_sum * rho)
            + nb * (2.0 * absorption - self._anti_sum * rho)
        )

    def lindblad_rhs(self, rho, params, bath):
        """dρ/dt of the quantum-optical master equation, written element-wise"""
        rho = np.asarray(rho, dtype=complex)
        return -1j * params.omega * self._detuning * rho + self._dissipator(rho, bath, params.gamma_damp)

    def prepare_fock(self, n):
        if not 0 <= n < self.n_tr:
            raise ValueError(f"Fock level {n} does not fit in truncation {self.n_tr}")
        rho = np.zeros((self.n_tr, self.n_tr), dtype=complex)
        rho[n, n] = 1.0
        return DensityMatrix(rho)

    @staticmethod
    def displacement_operator(n_dim, amplitude):
        """exp(α a† - ᾱ a) on an n_dim-level space"""
        ops = LindbladOracle.build_operators(n_dim)
        return expm(amplitude * ops.raising - np.conj(amplitude) * ops.lower)

    @staticmethod
    def squeeze_operator(n_dim, squeeze_r):
        """exp((r/2)(a² - a†²)); r > 0 narrows the position distribution"""
        ops = LindbladOracle.build_operators(n_dim)
        return expm(0.5 * squeeze_r * (ops.lower @ ops.lower - ops.raising @ ops.raising))

    def check_headroom(self, amplitude, squeeze_r):
        sinh_r, cosh_r = math.sinh(squeeze_r), math.cosh(squeeze_r)
        mean = abs(amplitude) ** 2 + sinh_r ** 2
        variance = abs(amplitude * cosh_r - np.conj(amplitude) * sinh_r) ** 2 + 2.0 * (sinh_r * cosh_r) ** 2
        reach = mean + ORACLE_SETTINGS["headroom_sigmas"] * math.sqrt(variance)
        if reach >= self.n_tr:
            logger.error(f"State reaches n≈{reach:.1f}, truncation is {self.n_tr}")
            raise TruncationError(
                f"Initial state needs more than {self.n_tr} levels (mean {mean:.2f}, reach {reach:.1f})"
            )
        return reach

    def prepare_gaussian(self, state, omega):
        """D(α) S(r)|0> with <q> = q̄, <p> = p̄ and (Δq)² = σ_c² e^{-2r}"""
        alpha1, alpha2 = state.coherent_amplitude(omega)
        amplitude = complex(alpha1, alpha2)
        self.check_headroom(amplitude, state.squeeze_r)

        padded = ORACLE_SETTINGS["preparation_padding"] * self.n_tr
        vacuum = np.zeros(padded, dtype=complex)
        vacuum[0] = 1.0
        psi = self.displacement_operator(padded, amplitude) @ (self.squeeze_operator(padded, state.squeeze_r) @ vacuum)
        psi = psi[: self.n_tr]
        psi = psi / np.linalg.norm(psi)
        return DensityMatrix(np.outer(psi, psi.conj()))

    def thermal_state(self, bath):
        levels = np.arange(self.n_tr)
        weights = bath.n_beta ** levels / (1.0 + bath.n_beta) ** (levels + 1)
        return DensityMatrix(np.diag(weights / weights.sum()).astype(complex))

    def step_size(self, params, bath):
        """RK4 step for the dissipator alone; the free rotation is applied exactly"""
        return self.step_scale / (params.gamma_damp * bath.coth_factor * self.n_tr)

    def evolve(self, rho0, params, bath, grid):
        """
        Density matrices at every grid time.

        The dissipator commutes with the free rotation, so it is integrated
        in the co-rotating frame and the phases e^{-iω(m-n)t} are restored
        exactly at each output time.
        """
        rho0.validate()
        times = grid.as_array()
        h_max = self.step_size(params, bath)
        rotating = rho0.entries.copy()
        current_time = 0.0
        states = []
        samples = set(np.linspace(0, len(times) - 1, ORACLE_SETTINGS["positivity_samples"]).round().astype(int))
        logger.info(f"Evolving n_tr={self.n_tr} to t={times[-1]:.4g} with h<={h_max:.3e}")

        for index, target in enumerate(times):
            span = target - current_time
            if span > 0:
                steps = int(math.ceil(span / h_max))
                h = span / steps
                for _ in range(steps):
                    rotating = self._rk4_step(rotating, bath, params.gamma_damp, h)
                current_time = target
            rho = DensityMatrix(np.exp(-1j * params.omega * self._detuning * target) * rotating)
            self._check_run(rho, index in samples, target)
            states.append(rho)
        logger.info(f"Oracle run finished at t={current_time:.4g}")
        return states

    def _rk4_step(self, rho, bath, gamma_damp, h):
        k1 = self._dissipator(rho, bath, gamma_damp)
        k2 = self._dissipator(rho + 0.5 * h * k1, bath, gamma_damp)
        k3 = self._dissipator(rho + 0.5 * h * k2, bath, gamma_damp)
        k4 = self._dissipator(rho + h * k3, bath, gamma_damp)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return 0.5 * (rho + rho.conj().T)

    def _check_run(self, rho, check_positivity, time):
        drift = abs(np.trace(rho.entries).real - 1.0)
        if drift > ORACLE_SETTINGS["trace_drift_tolerance"]:
            raise TruncationError(f"Trace drifted by {drift:.3e} at t={time:.4g}")
        if rho.leakage > ORACLE_SETTINGS["leakage_tolerance"]:
            logger.error(f"Leakage {rho.leakage:.3e} at t={time:.4g}")
            raise TruncationError(f"Population {rho.leakage:.3e} reached the truncation edge at t={time:.4g}")
        if check_positivity:
            rho.validate(check_positivity=True)

    def observables(self, rho, omega):
        ops = self.operators
        entries = rho.entries
        sigma_c = math.sqrt(1.0 / (2.0 * omega))
        q = sigma_c * (ops.lower + ops.raising)
        p = 1j * math.sqrt(omega / 2.0) * (ops.raising - ops.lower)

        def expect(operator):
            return float(np.trace(entries @ operator).real)

        mean_q, mean_p = expect(q), expect(p)
        purity = float(np.sum(np.abs(entries) ** 2))
        diagonals = entries.diagonal().real.copy()
        levels = np.arange(self.n_tr)
        return OracleObservables(
            purity=purity,
            entropy=-math.log(purity),
            mean_q=mean_q,
            mean_p=mean_p,
            var_q=expect(q @ q) - mean_q ** 2,
            var_p=expect(p @ p) - mean_p ** 2,
            cov_qp=0.5 * expect(q @ p + p @ q) - mean_q * mean_p,
            mean_n=float(levels @ diagonals),
            mean_n2=float(levels ** 2 @ diagonals),
            diagonals=diagonals,
        )

    def trajectory_frame(self, grid, states, params):
        """One row of observables per grid time, with Γt alongside t"""
        rows = []
        for time, rho in zip(grid.times, states):
            obs = self.observables(rho, params.omega)
            rows.append({
                "t": time,
                "gt": params.gamma_damp * time,
                "purity": obs.purity,
                "entropy": obs.entropy,
                "mean_q": obs.mean_q,
                "mean_p": obs.mean_p,
                "var_q": obs.var_q,
                "mean_n": obs.mean_n,
                "var_energy": obs.var_energy,
            })
        return pd.DataFrame(rows)


class ClassicalMomentOracle:
    @staticmethod
    def _drift_matrix(params):
        return np.array([[0.0, 1.0], [-params.omega ** 2, -params.gamma_damp]])

    @staticmethod
    def _rhs(mean, cov, drift, diffusion):
        return drift @ mean, drift @ cov + cov @ drift.T + diffusion

    @staticmethod
    def classical_moment_evolve(params, temperature, init, grid):
        drift = ClassicalMomentOracle._drift_matrix(params)
        diffusion = np.diag([0.0, 2.0 * params.gamma_damp * temperature])
        h_max = ORACLE_SETTINGS["moment_step_scale"] / max(params.omega, params.gamma_damp)
        mean = np.asarray(init.mean, dtype=float)
        cov = init.cov.copy()
        current_time = 0.0
        states = []

        for target in grid.times:
            span = target - current_time
            if span > 0:
                steps = int(math.ceil(span / h_max))
                h = span / steps
                for _ in range(steps):
                    m1, c1 = ClassicalMomentOracle._rhs(mean, cov, drift, diffusion)
                    m2, c2 = ClassicalMomentOracle._rhs(mean + 0.5 * h * m1, cov + 0.5 * h * c1, drift, diffusion)
                    m3, c3 = ClassicalMomentOracle._rhs(mean + 0.5 * h * m2, cov + 0.5 * h * c2, drift, diffusion)
                    m4, c4 = ClassicalMomentOracle._rhs(mean + h * m3, cov + h * c3, drift, diffusion)
                    mean = mean + (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4)
                    cov = cov + (h / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
                    cov = 0.5 * (cov + cov.T)
                current_time = target
            states.append(ClassicalMomentState(tuple(mean), cov.copy()))
        return states
