from actin_automaton.commands.common import (
    add_graph_flag,
    add_max_steps_flag,
    add_output_flag,
    add_rule_flag,
    build,
    check_output,
    finish,
    info,
    load_graph_from_args,
)
from actin_automaton.config import Settings
from actin_automaton.experiments.compare import compare_to_reference, graph_matches_reference, render_comparisons
from actin_automaton.experiments.sweep import TABLE1_RHOS, SweepConfig, parse_rho_list, sweep_ratio
from actin_automaton.experiments.table import render_sweep_table
from actin_automaton.molgraph.stats import compute_stats
from actin_automaton.outputs.service import check_destination, write_frame

SCENARIOS = {"single": "single", "plus": "plus", "plus-minus": "plus-minus", "plusminus": "plus-minus"}

HELP = """\
Ratio sweep. Raw rows (-o): rho,trial,seed,scenario,rule,p,c,e,termination,
sorted by (rho, trial). Summary (--summary-out and stdout):
rho,n,n_exhausted,p,c,e,sigma_p,sigma_c,sigma_e with sample standard
deviations; budget-exhausted trials are excluded from the means. Every
trial seed is derived from --seed, so results do not depend on --threads.
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("sweep", help="rho x trials sweep", description=HELP)
    add_graph_flag(p)
    add_rule_flag(p)
    p.add_argument("--scenario", choices=sorted(SCENARIOS), default="plus")
    p.add_argument("--rho", default=None, help="start:stop:step or a,b,c (default 0.1:0.9:0.1)")
    p.add_argument("--trials", type=int, default=10, help="trials per rho")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    add_max_steps_flag(p)
    p.add_argument("--summary-out", default=None, help="per-rho summary CSV")
    p.add_argument("--compare", action="store_true", help="compare with the reference results (stderr)")
    add_output_flag(p, "raw rows CSV")
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    if args.summary_out:
        check_destination(args.summary_out, {"csv"})

    rho_list = parse_rho_list(args.rho) if args.rho else list(TABLE1_RHOS)
    g = load_graph_from_args(args, settings)
    cfg = build(
        SweepConfig,
        rule=args.rule,
        scenario=SCENARIOS[args.scenario],
        rho_list=rho_list,
        trials_per_rho=args.trials,
        base_seed=args.seed,
        max_steps=args.max_steps if args.max_steps is not None else settings.max_steps_for(g.node_count),
        history_cap_mb=settings.history_cap_mb,
    )

    summary, raw = sweep_ratio(g, cfg, workers=settings.threads)

    if args.output:
        write_frame(args.output, raw)
    if args.summary_out:
        write_frame(args.summary_out, summary.to_frame())
    print(render_sweep_table(summary), end="")

    if args.compare:
        gating = graph_matches_reference(compute_stats(g, workers=settings.threads))
        info(render_comparisons(compare_to_reference(summary, gating=gating, raw=raw)))

    finish(args, "sweep", cfg.model_dump(mode="json"), extra_outputs=[args.summary_out])
    return 0
