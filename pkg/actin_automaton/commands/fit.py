import pandas as pd

from actin_automaton.commands.common import add_output_flag, check_output, finish, info
from actin_automaton.config import Settings
from actin_automaton.experiments.compare import compare_to_reference, render_comparisons
from actin_automaton.experiments.fit import fit_power_law, points_from_csv
from actin_automaton.outputs.service import emit_frame

HELP = """\
Fit p = a * rho^b to the per-rho mean transients of a sweep CSV (raw rows
or summary). Unweighted least squares on (ln rho, ln p). Prints a,b,residual,n_points.
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("fit", help="power-law fit of p against rho", description=HELP)
    p.add_argument("table", help="sweep raw or summary CSV")
    p.add_argument("--compare", action="store_true", help="compare with the reference fit (stderr, informational)")
    add_output_flag(p)
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    fit = fit_power_law(points_from_csv(args.table))
    row = {"a": f"{fit.a:.10g}", "b": f"{fit.b:.10g}", "residual": f"{fit.residual:.6g}", "n_points": fit.n_points}
    emit_frame(pd.DataFrame([row]), args.output)
    if args.compare:
        info(render_comparisons(compare_to_reference(fit, gating=False)))
    finish(args, "fit", {"table": args.table}, graph_path=args.table)
    return 0
