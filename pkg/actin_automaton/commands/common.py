"""
Helpers shared by the subcommand modules: graph loading from flags, the
-o/--output convention and manifests.
"""

import argparse
import logging
import sys

from pydantic import ValidationError

from actin_automaton.config import Settings
from actin_automaton.errors import UsageError
from actin_automaton.models import ExcitationRule
from actin_automaton.molgraph.edgelist import load_graph
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.outputs.service import check_destination, write_manifest

logger = logging.getLogger(__name__)

GRAPH_HELP = "edge list, canonical graph file or .pdb structure"


# ── flags ────────────────────────────────────────────────────────

def add_graph_flag(parser: argparse.ArgumentParser, positional: bool = False) -> None:
    """--graph, or with ``positional`` a GRAPH argument that --graph may replace."""
    if positional:
        parser.add_argument("graph_file", nargs="?", default=None, metavar="GRAPH", help=GRAPH_HELP)
        parser.add_argument("--graph", default=None, help=GRAPH_HELP)
    else:
        parser.add_argument("--graph", required=True, help=GRAPH_HELP)
    parser.add_argument("--strip-h", action="store_true", help="drop hydrogens when reading a structure")


def add_output_flag(parser: argparse.ArgumentParser, help_text: str = "write data here instead of stdout") -> None:
    parser.add_argument("-o", "--output", default=None, help=help_text + " (a .manifest.json is written next to it)")


def add_rule_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rule", default="a0", type=ExcitationRule.parse,
                        help="a0 (sigma >= 1), a1 (sigma == 1), lo:hi or lo: (unbounded)")


def add_max_steps_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-steps", type=int, default=None,
                        help="step budget per run (default: ACTIN_MAX_STEPS_FACTOR x N)")


# ── loading ──────────────────────────────────────────────────────

def graph_path_from_args(args) -> str:
    positional = getattr(args, "graph_file", None)
    if positional is not None and args.graph is not None and positional != args.graph:
        raise UsageError("Give the graph either as GRAPH or with --graph, not both")
    path = args.graph if args.graph is not None else positional
    if path is None:
        raise UsageError("A graph file is required (GRAPH or --graph)")
    args.graph = path
    return path


def load_graph_from_args(args, settings: Settings) -> MolecularGraph:
    return load_graph(
        graph_path_from_args(args),
        bond_mode=settings.bond_mode,
        tolerance=settings.bond_tolerance,
        strip_h=getattr(args, "strip_h", False),
    )


def resolve_max_steps(args, settings: Settings, g: MolecularGraph) -> int:
    max_steps = args.max_steps if args.max_steps is not None else settings.max_steps_for(g.node_count)
    if max_steps < 1:
        raise UsageError("--max-steps must be >= 1")
    return max_steps


def check_output(args, allowed: set[str]) -> None:
    """Reject a bad destination before doing any work."""
    if args.output is not None:
        check_destination(args.output, allowed)


def build(model, **fields):
    """Validate a pydantic model from CLI values; validation errors are usage errors."""
    try:
        return model(**fields)
    except ValidationError as e:
        err = e.errors()[0]
        loc = ".".join(str(x) for x in err["loc"]) or model.__name__
        raise UsageError(f"Invalid {loc}: {err['msg']}") from e


def finish(args, command: str, parameters: dict, extra_outputs=(), graph_path=None) -> None:
    """Write the manifest for a successful run that produced files."""
    if args.output is None:
        return
    write_manifest(
        args.output,
        command=command,
        argv=args.argv,
        parameters=parameters,
        graph_path=graph_path if graph_path is not None else getattr(args, "graph", None),
        extra_outputs=[p for p in extra_outputs if p],
    )


def info(text: str) -> None:
    """Human-oriented notes go to stderr; stdout stays data only."""
    sys.stderr.write(text)
    sys.stderr.flush()
