from actin_automaton.commands.common import (
    add_graph_flag,
    add_max_steps_flag,
    add_output_flag,
    add_rule_flag,
    check_output,
    finish,
    info,
    load_graph_from_args,
    resolve_max_steps,
)
from actin_automaton.config import Settings
from actin_automaton.errors import UsageError
from actin_automaton.experiments.compare import compare_to_reference, graph_matches_reference, render_comparisons
from actin_automaton.experiments.single import DEFAULT_BAND, sweep_single_node
from actin_automaton.experiments.table import render_single_summary
from actin_automaton.molgraph.stats import compute_stats
from actin_automaton.outputs.service import write_frame
from actin_automaton.reference import SINGLE_A1_SAMPLE

HELP = """\
Excite each node of the resting graph on its own (or --sample K seeded
nodes; a bare --sample runs the 70-node A1 reference sample) and
summarise the transient lengths: mean, median, min, max, the number of
nodes with p inside --band and the node with the longest transient
together with its eccentricity. Per-node rows (-o): node,p,c,e,termination.
"""


def _band(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as e:
        raise UsageError(f"Invalid band: '{text}'. Use lo:hi") from e
    if lo > hi:
        raise UsageError(f"Invalid band: '{text}'. lo must be <= hi")
    return lo, hi


def register(subparsers) -> None:
    p = subparsers.add_parser("single-sweep", help="every node as a single stimulus", description=HELP)
    add_graph_flag(p)
    add_rule_flag(p)
    add_max_steps_flag(p)
    p.add_argument("--band", type=_band, default=DEFAULT_BAND, help="p band to count, lo:hi (default 2:15)")
    p.add_argument("--sample", type=int, nargs="?", const=SINGLE_A1_SAMPLE, default=None, metavar="K",
                   help=f"run K seeded nodes instead of all (bare flag: {SINGLE_A1_SAMPLE})")
    p.add_argument("--seed", type=int, default=0, help="seed for --sample")
    p.add_argument("--compare", action="store_true", help="compare with the reference results (stderr)")
    add_output_flag(p, "per-node rows CSV")
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    if args.sample is not None and args.sample < 1:
        raise UsageError("--sample must be >= 1")

    g = load_graph_from_args(args, settings)
    max_steps = resolve_max_steps(args, settings, g)
    summary, rows = sweep_single_node(
        g, args.rule, max_steps,
        band=args.band, sample=args.sample, seed=args.seed,
        workers=settings.threads, history_cap_mb=settings.history_cap_mb,
    )

    if args.output:
        write_frame(args.output, rows)
    print(render_single_summary(summary), end="")

    if args.compare:
        gating = graph_matches_reference(compute_stats(g, workers=settings.threads))
        info(render_comparisons(compare_to_reference(summary, gating=gating)))

    finish(args, "single-sweep", {
        "rule": args.rule.label, "max_steps": max_steps, "band": list(args.band),
        "sample": args.sample, "seed": args.seed,
    })
    return 0
