"""Command-line entry point: one subcommand per analysis or simulation product."""
import argparse
import sys
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, ValidationError

from plankton_dynamics.analysis.bifurcation import NeimarkSackerAnalyzer
from plankton_dynamics.analysis.regions import regions_report
from plankton_dynamics.analysis.stability import classified_fixed_points, classify_all
from plankton_dynamics.cli.export import export
from plankton_dynamics.cli.run_config import RunConfig, parse_config
from plankton_dynamics.simulation.dynamics import (
    DEFAULT_TANGENT,
    MLEResult,
    bifurcation_sweep,
    iterate_orbit,
    max_lyapunov_exponent,
)
from plankton_dynamics.utils.errors import ExportError, InvalidParametersError, NumericalFailureError
from plankton_dynamics.utils.logger import StructuredLogger, configure_logging

logger = StructuredLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

DEFAULT_FORMATS = {
    'fixed-points': 'json',
    'classify': 'json',
    'ns': 'json',
    'regions': 'json',
    'orbit': 'csv',
    'sweep': 'csv',
    'mle': 'csv',
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    params = common.add_argument_group('model parameters')
    params.add_argument('--beta', type=float, help='conversion efficiency (> 0)')
    params.add_argument('--r', type=float, help='zooplankton mortality (> 0)')
    params.add_argument('--theta', type=float, help='toxin liberation rate (> 0)')
    params.add_argument('--c', type=float, help='saturation constant (> 0)')
    params.add_argument('--h', type=int, help='Holling exponent (1 or 2)')
    io_group = common.add_argument_group('input/output')
    io_group.add_argument('--config', help='key=value run configuration; flags override it')
    io_group.add_argument('--output', help='output file (stdout when omitted)')
    io_group.add_argument('--format', choices=['csv', 'json'], help='output format')
    io_group.add_argument('--log', choices=['debug', 'info', 'warning', 'error', 'critical'], help='log level')
    return common


def _orbit_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('orbit protocol')
    group.add_argument('--u0', type=float, help='initial phytoplankton density')
    group.add_argument('--v0', type=float, help='initial zooplankton density')
    group.add_argument('--steps', type=int, help='total iterations (default 10000)')
    group.add_argument('--transient', type=int, help='iterations discarded before recording (default 9000)')
    group.add_argument('--record-every', type=int, help='record every n-th post-transient state')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='plankton-dynamics',
        description='Fixed points, stability, Neimark-Sacker analysis and simulation '
                    'of the discrete phytoplankton-zooplankton map.',
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    common = _common_options()

    sub.add_parser('fixed-points', parents=[common], help='existence count, locations and labels of interior fixed points')
    sub.add_parser('classify', parents=[common], help='labels of boundary and interior fixed points')

    ns = sub.add_parser('ns', parents=[common], help='Neimark-Sacker point and first Lyapunov quantity')
    ns.add_argument('--index', type=int, help='which q(u)=1 solution, ascending in u (default 0)')
    ns.add_argument('--c02-form', choices=['reference', 'similarity'], help='closed form used for c02')

    orbit = sub.add_parser('orbit', parents=[common], help='iterate one orbit')
    _orbit_options(orbit)

    sweep = sub.add_parser('sweep', parents=[common], help='bifurcation diagram over theta')
    _orbit_options(sweep)
    sweep.add_argument('--theta-min', type=float, help='lower end of the theta grid')
    sweep.add_argument('--theta-max', type=float, help='upper end of the theta grid')
    sweep.add_argument('--grid', type=int, help='number of theta values (>= 2)')
    sweep.add_argument('--keep', type=int, help='samples kept per theta (default 200)')
    sweep.add_argument('--workers', type=int, help='worker processes for the columns')

    mle = sub.add_parser('mle', parents=[common], help='maximum Lyapunov exponent of one orbit')
    _orbit_options(mle)
    mle.add_argument('--tangent-u', type=float, help='initial tangent vector, u component')
    mle.add_argument('--tangent-v', type=float, help='initial tangent vector, v component')

    regions = sub.add_parser('regions', parents=[common], help='nonnegativity, invariance of M, global attractor')
    regions.add_argument('--u0', type=float, help='initial phytoplankton density for the prediction')
    regions.add_argument('--v0', type=float, help='initial zooplankton density for the prediction')
    return parser


def _cmd_fixed_points(cfg: RunConfig) -> BaseModel:
    return classified_fixed_points(cfg.model_params())


def _cmd_classify(cfg: RunConfig) -> BaseModel:
    return classify_all(cfg.model_params())


def _cmd_ns(cfg: RunConfig) -> BaseModel:
    base = cfg.base_params()
    analyzer = NeimarkSackerAnalyzer(c02_form=cfg.c02_form)
    return analyzer.analyze(base.beta, base.r, base.c, base.h, cfg.index or 0)


def _cmd_orbit(cfg: RunConfig) -> BaseModel:
    return iterate_orbit(cfg.model_params(), cfg.orbit_spec())


def _cmd_sweep(cfg: RunConfig) -> BaseModel:
    cfg.require('theta_min', 'theta_max', 'grid')
    return bifurcation_sweep(
        cfg.base_params(),
        cfg.theta_min,
        cfg.theta_max,
        cfg.grid,
        cfg.orbit_spec(),
        cfg.keep_count(),
        workers=cfg.workers,
    )


def _cmd_mle(cfg: RunConfig) -> BaseModel:
    params = cfg.model_params()
    spec = cfg.orbit_spec()
    tangent = cfg.tangent()
    value = max_lyapunov_exponent(params, spec, tangent)
    return MLEResult(params=params, spec=spec, tangent=tangent or DEFAULT_TANGENT, mle=value)


def _cmd_regions(cfg: RunConfig) -> BaseModel:
    return regions_report(cfg.model_params(), cfg.initial_state())


COMMANDS: Dict[str, Callable[[RunConfig], BaseModel]] = {
    'fixed-points': _cmd_fixed_points,
    'classify': _cmd_classify,
    'ns': _cmd_ns,
    'orbit': _cmd_orbit,
    'sweep': _cmd_sweep,
    'mle': _cmd_mle,
    'regions': _cmd_regions,
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """File values first, then every flag given on the command line."""
    base = parse_config(args.config) if args.config else RunConfig()
    flags = {k: v for k, v in vars(args).items() if k not in ('command', 'config')}
    return base.merged(flags)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK

    try:
        cfg = resolve_config(args)
        if cfg.log:
            configure_logging(cfg.log)
        result = COMMANDS[args.command](cfg)
        export(result, cfg.format or DEFAULT_FORMATS[args.command], cfg.output)
    except (ValidationError, InvalidParametersError) as e:
        logger.error(f"Invalid input: {e}", error=e, command=args.command)
        return EXIT_INVALID
    except (NumericalFailureError, ExportError) as e:
        logger.error(f"Numerical or export failure: {e}", error=e, command=args.command)
        return EXIT_NUMERICAL
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", error=e, command=args.command)
        return EXIT_INTERNAL

    if getattr(result, 'diverged', False) is True:
        logger.warning("Orbit diverged; partial data written", command=args.command)
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
