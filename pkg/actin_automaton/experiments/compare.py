"""
Side-by-side comparison of computed results with the reference numbers.
"""

import logging

import pandas as pd
from pydantic import BaseModel

from actin_automaton import reference as ref
from actin_automaton.experiments.fit import FitResult
from actin_automaton.experiments.single import SingleSweepSummary
from actin_automaton.experiments.sweep import SweepSummary
from actin_automaton.models import Termination
from actin_automaton.molgraph.stats import GraphStats
from actin_automaton.rings.perception import RingCensus

logger = logging.getLogger(__name__)

COMPARISON_COLUMNS = ["name", "expected", "observed", "tolerance", "status"]


class Comparison(BaseModel):
    name: str
    expected: int | float | str
    observed: int | float | str | None
    tolerance: str
    ok: bool
    gating: bool


def _exact(name, expected, observed, gating) -> Comparison:
    return Comparison(name=name, expected=expected, observed=observed, tolerance="exact",
                      ok=bool(observed == expected), gating=gating)


def _relative(name, expected, observed, rel, gating) -> Comparison:
    ok = observed is not None and abs(observed - expected) <= rel * abs(expected)
    return Comparison(name=name, expected=expected, observed=observed, tolerance=f"±{rel:.0%}",
                      ok=bool(ok), gating=gating)


def _absolute(name, expected, observed, tol, gating) -> Comparison:
    ok = observed is not None and abs(observed - expected) <= tol
    return Comparison(name=name, expected=expected, observed=observed, tolerance=f"±{tol:g}",
                      ok=bool(ok), gating=gating)


def _within(name, band, observed, gating) -> Comparison:
    lo, hi = band
    ok = observed is not None and lo <= observed <= hi
    return Comparison(name=name, expected=f"[{lo}, {hi}]", observed=observed, tolerance="band",
                      ok=bool(ok), gating=gating)


# ======================================================
# GRAPH MATCH
# ======================================================

def graph_matches_reference(stats: GraphStats) -> bool:
    return all(c.ok for c in compare_stats(stats) if c.gating)


def compare_stats(stats: GraphStats) -> list[Comparison]:
    out = [
        _exact("node_count", ref.GRAPH_NODES, stats.node_count, True),
        _exact("edge_count", ref.GRAPH_EDGES, stats.edge_count, True),
    ]
    for degree, count in ref.DEGREE_HISTOGRAM.items():
        out.append(_exact(f"degree_hist_{degree}", count, stats.degree_histogram.get(degree, 0), True))
    out += [
        _exact("diameter_nodes", ref.DIAMETER_NODES, stats.diameter_nodes, True),
        _exact("mean_distance", ref.MEAN_DISTANCE, round(stats.mean_distance), True),
        _exact("median_distance", ref.MEDIAN_DISTANCE, round(stats.median_distance), True),
        _absolute("degree_mean", ref.DEGREE_MEAN, round(stats.degree_mean, 3), 0.001, False),
        _absolute("degree_stddev", ref.DEGREE_STDDEV, stats.degree_stddev, 0.05, False),
    ]
    return out


# ======================================================
# EXPERIMENTS
# ======================================================

def compare_single_sweep(summary: SingleSweepSummary, gating: bool) -> list[Comparison]:
    if summary.rule == "a1" and summary.sampled:
        return [
            _relative(f"a1_sample_{k}", v, getattr(summary, k), ref.SINGLE_REL_TOL, gating)
            for k, v in ref.SINGLE_A1.items()
        ]
    if summary.rule != "a0":
        return []
    out = [
        _relative("a0_single_mean", ref.SINGLE_A0["mean"], summary.mean, ref.SINGLE_REL_TOL, gating),
        _relative("a0_single_median", ref.SINGLE_A0["median"], summary.median, ref.SINGLE_REL_TOL, gating),
        _relative("a0_single_max", ref.SINGLE_A0["max"], summary.max, ref.SINGLE_REL_TOL, gating),
        _exact("a0_single_min", ref.SINGLE_A0["min"], summary.min, gating),
    ]
    if tuple(summary.band) == ref.SINGLE_A0_BAND:
        out.append(_absolute("a0_single_band_count", ref.SINGLE_A0_BAND_COUNT, summary.band_count,
                             ref.BAND_COUNT_TOL, gating))
    return out


def compare_sweep(summary: SweepSummary, gating: bool, raw: pd.DataFrame | None = None) -> list[Comparison]:
    out = []
    key = (summary.rule, summary.scenario)
    expected = ref.GRAND_MEANS.get(key)
    if expected:
        for col, v in expected.items():
            out.append(_relative(f"{summary.rule}_{summary.scenario}_grand_{col}", v,
                                 getattr(summary, f"grand_{col}"), ref.GRAND_MEANS_REL_TOL, gating))
        for r in summary.rows:
            if r.c is not None and r.c > 1:
                out.append(_within(f"cycle_length_rho_{r.rho:g}", ref.CYCLE_LENGTH_BAND, r.c, gating))
                out.append(_within(f"cycle_excitation_rho_{r.rho:g}", ref.CYCLE_EXCITATION_BAND, r.e, gating))

    if raw is not None and summary.rule == "a0" and summary.scenario in ("plus", "single"):
        absorbing = int((raw["termination"] == Termination.absorbing.value).sum())
        out.append(_exact("a0_all_absorbing", len(raw), absorbing, gating))
    if raw is not None and summary.rule == "a0" and summary.scenario == "plus-minus":
        cycles = raw.loc[raw["termination"] == Termination.limit_cycle.value, "c"]
        if len(cycles):
            out.append(_exact("a0_min_cycle_length", ref.MIN_CYCLE_LENGTH, int(cycles.min()), gating))
    return out


def compare_fit(fit: FitResult, gating: bool) -> list[Comparison]:
    return [
        _absolute("power_law_a", ref.POWER_LAW_A, fit.a, ref.POWER_LAW_A_TOL, gating),
        _absolute("power_law_b", ref.POWER_LAW_B, fit.b, ref.POWER_LAW_B_TOL, gating),
    ]


def compare_census(c: RingCensus, gating: bool) -> list[Comparison]:
    out = [_exact("ring_total", ref.RING_TOTAL, c.total, gating)]
    out += [_exact(f"rings_{k}", v, c.counts.get(k, 0), gating) for k, v in ref.RING_CENSUS_BY_RESIDUE.items()]
    return out


def compare_to_reference(result, *, gating: bool = False, raw: pd.DataFrame | None = None) -> list[Comparison]:
    """Dispatch on the result type. Graph statistics always gate."""
    if isinstance(result, GraphStats):
        comparisons = compare_stats(result)
    elif isinstance(result, SingleSweepSummary):
        comparisons = compare_single_sweep(result, gating)
    elif isinstance(result, SweepSummary):
        comparisons = compare_sweep(result, gating, raw)
    elif isinstance(result, FitResult):
        comparisons = compare_fit(result, gating)
    elif isinstance(result, RingCensus):
        comparisons = compare_census(result, gating)
    else:
        raise TypeError(f"no reference for {type(result).__name__}")

    failed = [c.name for c in comparisons if c.gating and not c.ok]
    if failed:
        logger.warning("Reference mismatch | failed=%s", ",".join(failed))
    return comparisons


def render_comparisons(comparisons: list[Comparison]) -> str:
    rows = [
        [c.name, c.expected, c.observed, c.tolerance,
         ("pass" if c.ok else "FAIL") if c.gating else ("match" if c.ok else "differs")]
        for c in comparisons
    ]
    df = pd.DataFrame(rows, columns=COMPARISON_COLUMNS, dtype=object)
    return df.to_csv(index=False, lineterminator="\n")
