"""
Command-line entry point.

    python app.py entropy --gaussian r=2 --nbeta 1
    python app.py variance --energy --fock n=5 --nbeta 1.5 --out fock_variance.csv
    python app.py phase --fock n=1
    python app.py verify --suite classical
"""
import argparse
import logging
import os
import sys

from config.constants import LOG_LEVEL_ENV
from config.settings import VARIANCE_MODES, SettingsLoader
from modules.phase_diagram import PhaseDiagram
from modules.reporting import ReportWriter
from modules.time_series import TimeSeriesBuilder
from modules.verification import VerificationSuite
from utils.helpers import ImaginaryResidueError, NegativeProbabilityError, TruncationError

logger = logging.getLogger(__name__)


def configure_logging(level=None):
    level = (level or os.environ.get(LOG_LEVEL_ENV) or "INFO").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ValueError(f"Unknown log level {level!r}")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _emit_frame(frame, config):
    text = ReportWriter.write_frame(frame, config.out)
    if config.out is None:
        sys.stdout.write(text)
    return 0


def _emit_payload(payload, config):
    text = ReportWriter.write_payload(payload, config.out)
    if config.out is None:
        sys.stdout.write(text)
    return 0


def cmd_entropy(config):
    return _emit_frame(TimeSeriesBuilder(config).entropy_series(), config)


def cmd_variance(config):
    builder = TimeSeriesBuilder(config)
    if config.variance_mode == "q":
        frame = builder.q_variance_series()
    elif config.variance_mode == "energy":
        frame = builder.energy_variance_series()
    else:
        frame = builder.classical_variance_series()
    return _emit_frame(frame, config)


def cmd_phase(config):
    return _emit_payload(PhaseDiagram.from_config(config), config)


def cmd_photon(config):
    return _emit_frame(TimeSeriesBuilder(config).photon_series(), config)


def cmd_classical_entropy(config):
    return _emit_frame(TimeSeriesBuilder(config).classical_entropy_series(), config)


def cmd_verify(config):
    report = VerificationSuite().run(config.suites)
    for line in ReportWriter.verification_summary(report):
        logger.info(line)
    if config.out is not None and config.out.lower().endswith(".csv"):
        _emit_frame(ReportWriter.checks_frame(report), config)
    else:
        _emit_payload(report, config)
    return 0 if report["passed"] else 1


COMMAND_HANDLERS = {
    "entropy": cmd_entropy,
    "variance": cmd_variance,
    "phase": cmd_phase,
    "photon": cmd_photon,
    "classical-entropy": cmd_classical_entropy,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run file or preset name")
    common.add_argument("--out", help="Output path; stdout when omitted")
    common.add_argument("--log-level", dest="log_level", help=f"Logging level (default from {LOG_LEVEL_ENV} or INFO)")
    common.add_argument("--omega", type=float, help="Oscillator frequency ω")
    common.add_argument("--gamma", type=float, help="Damping rate Γ")
    common.add_argument("--gamma-ratio", dest="gamma_ratio", type=float, help="Damping ratio γ = Γ/ω (sets Γ)")
    common.add_argument("--nbeta", type=float, nargs="+", help="Thermal occupation N_β, one series per value")
    common.add_argument("--temperature", type=float, help="Bath temperature k_B T; overrides --nbeta")
    common.add_argument("--gaussian", action="append", metavar="SPEC",
                        help="Gaussian initial state, e.g. r=1,q=1,p=0 or r=1,a1=0.5,a2=0; repeatable")
    common.add_argument("--fock", action="append", metavar="SPEC", help="Fock initial state, e.g. n=3; repeatable")
    common.add_argument("--alpha", nargs="+", help="Classical damping parameter α, e.g. 2i or 0.5")
    common.add_argument("--lambda", dest="energy_ratio", type=float, help="Initial energy over k_B T (classical)")
    common.add_argument("--gt-max", dest="gt_max", type=float, help="Largest Γt of the grid")
    common.add_argument("--points", type=int, help="Number of grid points")
    common.add_argument("--photon-n-max", dest="photon_n_max", type=int, help="Largest photon number reported")
    common.add_argument("--phase-points", dest="phase_points", type=int, help="N_β grid size of phase tables")
    common.add_argument("--oracle", action="store_true", help="Add Lindblad-oracle columns where available")
    common.add_argument("--truncation", type=int, help="Fock truncation of the oracle")

    parser = argparse.ArgumentParser(description="Relaxation of a harmonic oscillator in a thermal bath")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("entropy", parents=[common], help="Entropy S(t) and its rate")
    variance = subparsers.add_parser("variance", parents=[common], help="Position or energy variance")
    modes = variance.add_mutually_exclusive_group()
    for mode in VARIANCE_MODES:
        modes.add_argument(f"--{mode}", dest="variance_mode", action="store_const", const=mode)
    subparsers.add_parser("phase", parents=[common], help="Phase table over N_β")
    subparsers.add_parser("photon", parents=[common], help="Photon-number distribution P(n, t)")
    subparsers.add_parser("classical-entropy", parents=[common], help="Classical fine and coarse-grained entropy")
    verify = subparsers.add_parser("verify", parents=[common], help="Compare analytic results with the oracles")
    verify.add_argument("--suite", nargs="+", help="Subset of gaussian, fock, classical")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        config = SettingsLoader.build(args)
    except ValueError as e:
        logger.error(f"Invalid configuration: {str(e)}")
        return 2

    try:
        return COMMAND_HANDLERS[config.command](config)
    except ValueError as e:
        logger.error(f"Invalid request: {str(e)}")
        return 2
    except (TruncationError, ImaginaryResidueError, NegativeProbabilityError) as e:
        logger.error(f"Numerical check failed: {str(e)}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
