import argparse
import logging
import sys

from actin_automaton import __version__
from actin_automaton.commands import fit, ingest, replay, rings, run as run_cmd, single_sweep, stats, sweep
from actin_automaton.config import LOG_LEVELS, load_settings
from actin_automaton.errors import EXIT_INPUT, EXIT_USAGE, ActinError, UsageError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s | %(message)s"


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised (exit code 1) instead of sys.exit(2)."""

    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="actin-automaton", description="Excitable automata on molecular graphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="worker bound (default: ACTIN_THREADS or all cores)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="default: ACTIN_LOG_LEVEL or WARNING")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")
    parser.add_argument("--config", default=None, help="dotenv-style settings file")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")

    # ── graph ──────────────────────────────────────────────────
    ingest.register(subparsers)
    stats.register(subparsers)

    # ── dynamics ───────────────────────────────────────────────
    run_cmd.register(subparsers)
    sweep.register(subparsers)
    single_sweep.register(subparsers)
    fit.register(subparsers)

    # ── rings ──────────────────────────────────────────────────
    rings.register(subparsers)

    # ── reproducibility ────────────────────────────────────────
    replay.register(subparsers)
    return parser


def configure_logging(level: str, verbose: int) -> None:
    if verbose >= 2:
        level = "DEBUG"
    elif verbose == 1 and logging.getLevelName(level.upper()) > logging.INFO:
        level = "INFO"
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def run(argv: list[str]) -> int:
    """Parse ``argv``, dispatch to the subcommand and map errors to exit codes."""
    argv = list(argv)
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE

        settings = load_settings(args.config, threads=args.threads, log_level=args.log_level)
        configure_logging(settings.log_level, args.verbose)
        args.argv = argv
        logger.debug("Command start | command=%s threads=%s", args.command, settings.threads)
        return args.handler(args, settings)

    except ActinError as e:
        sys.stderr.write(f"error: {e.detail}\n")
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure | error=%s", e)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
