import pandas as pd

from actin_automaton.commands.common import add_graph_flag, add_output_flag, check_output, finish, info, load_graph_from_args
from actin_automaton.config import Settings
from actin_automaton.experiments.compare import compare_to_reference, render_comparisons
from actin_automaton.molgraph.stats import compute_stats
from actin_automaton.outputs.service import emit_frame

HELP = """\
Degree and distance statistics as key,value CSV rows: node_count,
edge_count, degree_min/max/mean/stddev/median, degree_hist_<d>,
component_count, largest_component_size, diameter_nodes, mean_distance,
median_distance, diameter_source, diameter_target, diameter_path.
Distances are taken over the largest connected component.
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("stats", help="graph statistics", description=HELP)
    add_graph_flag(p, positional=True)
    p.add_argument("--compare", action="store_true", help="compare with the reference graph (to stderr)")
    add_output_flag(p)
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    g = load_graph_from_args(args, settings)
    stats = compute_stats(g, workers=settings.threads)

    emit_frame(pd.DataFrame(stats.to_rows(), columns=["key", "value"], dtype=object), args.output)

    if args.compare:
        info(render_comparisons(compare_to_reference(stats)))
    finish(args, "stats", {"strip_h": args.strip_h})
    return 0
