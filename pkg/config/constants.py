import os

# Supported parameter ranges
SUPPORTED_RANGES = {
    "max_fock_n": 30,  # factorial and H_2n growth in double precision
    "max_photon_n": 400,  # largest photon number the normalized Hermite recurrence is used for
    "max_critical_n": 10,
    "min_truncation": 2,
    "max_truncation": 120,
}

# Numerical settings shared by the analytic and oracle modules
NUMERICS = {
    "zero_time": 1e-12,  # below this Γt, entropies return 0 directly
    "imag_tolerance": 1e-9,  # |Im| <= tol * (1 + |Re|)
    "probability_tolerance": 1e-9,
    "normalization_tolerance": 1e-10,  # population left beyond the photon cutoff
    "normalization_min_ratio": 0.5,
    "normalization_sigmas": 8.0,
    "critical_damping_alpha": 1e-3,  # |α| below this uses the series branch
    "series_terms": 8,
    "double_sum_max_n": 6,  # alternating Hermite-integral sum, cross-checks only
    "sign_change_floor": 1e-10,  # rates with smaller magnitude count as zero
    "fock_scan_points": 4000,
    "fock_scan_horizon": 30.0,  # Γt
    "fock_nc_tolerance": 1e-4,
    "lambda_scan_points": 4000,
    "lambda_scan_horizon": 15.0,  # Γt
    "lambda_bracket": (0.01, 50.0),
    "lambda_tolerance": 1e-3,
    "v2_horizon": 10.0,  # Γt
    "phase_scan_points": 6000,
    "phase_scan_horizon": 30.0,  # Γt
}

# Lindblad oracle settings
ORACLE_SETTINGS = {
    "default_truncation": 60,
    "preparation_padding": 2,  # states are prepared in padding * n_tr and cut
    "headroom_sigmas": 6.0,
    "hermitian_tolerance": 1e-12,
    "trace_tolerance": 1e-10,
    "trace_drift_tolerance": 1e-9,
    "eigenvalue_floor": -1e-8,
    "leakage_tolerance": 1e-8,
    "positivity_samples": 10,
    "step_scale": 0.01,
    "moment_step_scale": 1e-3,
}

# Pass/fail tolerances of the oracle comparison suite
TOLERANCES = {
    "entropy": 1e-4,
    "mean_q": 1e-4,
    "var_q": 1e-4,
    "mean_n": 1e-4,
    "var_energy": 1e-4,
    "diagonals": 1e-4,
    "classical_coefficients": 1e-8,
}

# Parameter sets of the oracle comparison suite
VERIFY_SETS = {
    "gaussian": {
        "omega": 1.0,
        "gamma_damp": 0.1,
        "squeeze_r": 1.0,
        "q_bar": 1.0,
        "p_bar": 0.0,
        "n_beta": 1.0,
        "gt_max": 5.0,
        "points": 21,
        "photon_n_max": 5,
        "truncation": 60,
    },
    "fock": {
        "omega": 1.0,
        "gamma_damp": 0.1,
        "n_values": [1, 2, 3],
        "n_beta_values": [0.5, 1.2],
        "gt_max": 5.0,
        "points": 21,
        "truncation": 60,
    },
    "classical": {
        "alphas": ["0.5", "0", "2i", "10i", "0.9"],
        "gamma_damp": 1.0,
        "temperature": 1.0,
        "q_bar": 0.3,
        "p_bar": 1.0,
        "gt_max": 10.0,
        "points": 41,
    },
}

# Default run parameters (reproduce the reference curves)
DEFAULT_RUN = {
    "omega": 1.0,
    "gamma_damp": 0.1,
    "n_beta": [1.0],
    "gt_max": 10.0,
    "points": 501,
    "photon_n_max": 5,
    "squeeze_r": 1.0,
    "variance_mode": "q",
    "alpha": "2i",
    "energy_ratio": 5.0,
    "phase_points": 41,
}

TRUNCATION_ENV = "OSCRELAX_TRUNCATION"
LOG_LEVEL_ENV = "OSCRELAX_LOG_LEVEL"

# Output settings
REPORT_SETTINGS = {
    "float_format": "%.12e",
    "schema_version": 1,
    "na_rep": "nan",
}

PRESET_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "presets")
