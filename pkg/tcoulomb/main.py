import argparse
import sys

from rich.console import Console

from tcoulomb.config import Config
from tcoulomb.errors import (ConvergenceError, InconsistentModelError, IntegrityError, InterpolationRangeError,
                             QuadratureError, UnboundStateError)
from tcoulomb.logger import Logger
from tcoulomb.shell import RunConfig, SpectrumShell
from tcoulomb.version import __version__
import tcoulomb.constants as constants

console = Console(stderr=True)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(constants.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser(config):
    parser = ArgumentParser(prog=constants.PACKAGE_NAME)
    parser.add_argument(
        "--version",
        "-v",
        action="version",
        version=f"{constants.PACKAGE_NAME} version {__version__}",
        help="Print version and exit.",
    )
    parser.add_argument(
        "command",
        choices=SpectrumShell.command_names() + ['help'],
        help="command to run; 'help [command]' describes each one",
    )
    parser.add_argument(
        "topic",
        nargs="?",
        default='',
        help="command to describe (with 'help')",
    )
    parser.add_argument(
        "-c",
        "--config-dir",
        action="store",
        help=f"directory to read config from (default: {config.config_dir})",
    )
    parser.add_argument(
        "-p",
        "--config-profile",
        action="store",
        help=f"config profile to use (default: {config.profile})",
    )
    parser.add_argument(
        "-e",
        "--debug-log",
        metavar="FILEPATH",
        action="store",
        help="debug logging to FILEPATH",
    )
    parser.add_argument(
        "--log-level",
        choices=['debug', 'info', 'warning', 'error'],
        action="store",
        help="console log level",
    )
    parser.add_argument("--n", type=int, help="truncation order")
    parser.add_argument("--l", type=int, help="angular momentum quantum number")
    parser.add_argument("--nu", type=int, help="node count (radial quantum number)")
    parser.add_argument("--i", type=int, help="root index, 1..n+1")
    parser.add_argument("--beta", type=float, help="dimensionless coupling")
    parser.add_argument("--n-max", type=int, help="highest truncation order on a curve")
    parser.add_argument("--tol", type=float, help="tolerance (roots for exact solutions, grid error for the oracle)")
    parser.add_argument("--format", dest="output_format", choices=constants.OUTPUT_FORMATS,
                        help=f"output format (default: {config.get('output.format')})")
    parser.add_argument("--out", metavar="PATH", help="output file (output directory for 'figures')")
    parser.add_argument("--level", choices=['quick', 'full'], default='quick', help="check level")
    parser.add_argument("--hydrogen", action="store_true", help="add physical columns for hydrogen (exact)")
    parser.add_argument("--r0", type=float, metavar="METRES", help="cutoff radius for hydrogen (oracle)")
    parser.add_argument("--r-max", type=float, help="domain or sampling range")
    parser.add_argument("--points", type=int, help="number of samples")
    parser.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def run_config(args, config) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=args.n,
        l=args.l,
        nu=args.nu,
        i=args.i,
        beta=args.beta,
        n_max=args.n_max,
        tol=args.tol,
        output_format=args.output_format or config.get('output.format'),
        out=args.out,
        level=args.level,
        hydrogen=args.hydrogen,
        r0=args.r0,
        r_max=args.r_max,
        points=args.points,
        inject_fault=args.inject_fault,
    )


def exit_code(error):
    if isinstance(error, IntegrityError):
        return constants.EXIT_INTEGRITY
    if isinstance(error, (ConvergenceError, UnboundStateError, QuadratureError)):
        return constants.EXIT_CONVERGENCE
    return constants.EXIT_USAGE


def main(argv=None):
    parser = build_parser(Config())
    args = parser.parse_args(argv)

    config_args = {
        'config_dir': args.config_dir,
    }
    if args.config_profile:
        config_args['profile'] = args.config_profile
    try:
        config = Config(**config_args)
    except FileNotFoundError as e:
        parser.error(str(e))
    config.load_from_file()

    if args.debug_log is not None:
        config.set('debug.log.enabled', True)
        config.set('debug.log.filepath', args.debug_log)
    if args.log_level is not None:
        config.set('log.console.level', args.log_level)
    log = Logger(__name__, config)

    shell = SpectrumShell(config)
    if args.command == 'help':
        shell.help(args.topic)
        return constants.EXIT_OK
    try:
        return shell.run_command(run_config(args, config))
    except (ValueError, InconsistentModelError, InterpolationRangeError, IntegrityError, ConvergenceError,
            UnboundStateError, QuadratureError, OSError) as e:
        code = exit_code(e)
        log.debug("%s failed", args.command, exc_info=True)
        console.print(f"{e.__class__.__name__}: {e}", markup=False, highlight=False)
        if isinstance(e, ConvergenceError) and e.best_estimate is not None:
            console.print(f"best estimate: alpha = {e.best_estimate!r}", markup=False, highlight=False)
        return code


if __name__ == "__main__":
    sys.exit(main())
