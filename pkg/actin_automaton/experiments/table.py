"""
Plain-text rendering of sweep summaries, one row per rho and a closing
row with the grand means.
"""

import pandas as pd

from actin_automaton.experiments.single import SingleSweepSummary
from actin_automaton.experiments.sweep import SweepSummary


def _fmt(x: float | None, digits: int = 1) -> str:
    return "-" if x is None else f"{x:.{digits}f}"


def render_sweep_table(summary: SweepSummary) -> str:
    header = f"{'rho':>6} {'n':>4} {'exh':>4} {'p':>9} {'sd(p)':>9} {'c':>7} {'sd(c)':>7} {'e':>8} {'sd(e)':>8}"
    lines = [f"rule={summary.rule} scenario={summary.scenario}", header, "-" * len(header)]
    for r in summary.rows:
        rho = "-" if r.rho is None else f"{r.rho:g}"
        lines.append(
            f"{rho:>6} {r.n:>4} {r.n_exhausted:>4} {_fmt(r.p):>9} {_fmt(r.sigma_p):>9} "
            f"{_fmt(r.c):>7} {_fmt(r.sigma_c):>7} {_fmt(r.e):>8} {_fmt(r.sigma_e):>8}"
        )
    lines.append("-" * len(header))
    lines.append(
        f"{'mean':>6} {'':>4} {'':>4} {_fmt(summary.grand_p):>9} {'':>9} "
        f"{_fmt(summary.grand_c):>7} {'':>7} {_fmt(summary.grand_e):>8}"
    )
    return "\n".join(lines) + "\n"


def render_single_summary(summary: SingleSweepSummary) -> str:
    lo, hi = summary.band
    rows = [
        ("rule", summary.rule),
        ("nodes_run", summary.nodes_run),
        ("sampled", str(summary.sampled).lower()),
        ("n_exhausted", summary.n_exhausted),
        ("mean_p", _fmt(summary.mean, 3)),
        ("median_p", _fmt(summary.median, 1)),
        ("min_p", "-" if summary.min is None else summary.min),
        ("max_p", "-" if summary.max is None else summary.max),
        (f"band_count[{lo},{hi}]", summary.band_count),
        ("longest_node", "-" if summary.longest_node is None else summary.longest_node),
        ("longest_eccentricity", "-" if summary.longest_eccentricity is None else summary.longest_eccentricity),
    ]
    return pd.DataFrame(rows, dtype=object).to_csv(index=False, header=False, lineterminator="\n")
