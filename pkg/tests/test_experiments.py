import numpy as np
import pandas as pd
import pytest

from actin_automaton import reference
from actin_automaton.errors import FitInputError, InputError, UsageError
from actin_automaton.experiments import (
    SweepConfig,
    compare_to_reference,
    excitation_profile,
    fit_power_law,
    longest_path,
    points_from_csv,
    render_comparisons,
    summarize,
    sweep_ratio,
    sweep_single_node,
)
from actin_automaton.experiments.sweep import RAW_COLUMNS, parse_rho_list
from actin_automaton.experiments.table import render_single_summary, render_sweep_table
from actin_automaton.models import ExcitationRule, ScenarioKind, StimulationEvent, Termination
from actin_automaton.utils.seeds import trial_seed
from conftest import cycle_graph, path_graph

A0 = ExcitationRule.a0()


def random_tree(seed: int, n: int):
    rng = np.random.default_rng(seed)
    from actin_automaton.molgraph.graph import MolecularGraph

    return MolecularGraph.from_edges(n, [(i, int(rng.integers(0, i))) for i in range(1, n)])


# ── single-node sweeps ───────────────────────────────────────────

def test_single_sweep_on_path(p3):
    summary, df = sweep_single_node(p3, A0)
    assert df["p"].tolist() == [4, 3, 4]
    assert set(df["termination"]) == {Termination.absorbing.value}
    assert summary.nodes_run == 3
    assert (summary.min, summary.max) == (3, 4)
    assert summary.mean == pytest.approx(11 / 3)
    assert summary.histogram == {3: 1, 4: 2}
    assert summary.band_count == 3
    assert summary.longest_node == 0
    assert summary.longest_eccentricity == 3


def test_single_sweep_sample_is_seeded():
    g = random_tree(4, 60)
    a, da = sweep_single_node(g, A0, sample=10, seed=5)
    b, db = sweep_single_node(g, A0, sample=10, seed=5)
    assert a.sampled
    assert da["node"].tolist() == db["node"].tolist()
    assert len(da) == 10


def test_single_sweep_parallel_matches_serial():
    g = random_tree(8, 80)
    serial, ds = sweep_single_node(g, A0, workers=1)
    parallel, dp = sweep_single_node(g, A0, workers=2)
    assert serial == parallel
    pd.testing.assert_frame_equal(ds, dp)


def test_trees_always_return_to_rest():
    for seed in range(5):
        _, df = sweep_single_node(random_tree(seed, 40), A0)
        assert set(df["termination"]) == {Termination.absorbing.value}


def test_longest_path():
    assert longest_path(path_graph(5)) == [0, 1, 2, 3, 4]
    assert len(longest_path(cycle_graph(6))) == 4


# ── ratio sweeps ─────────────────────────────────────────────────

def test_full_stimulation_settles_in_two_steps():
    cfg = SweepConfig(rule=A0, scenario=ScenarioKind.plus, rho_list=[1.0], trials_per_rho=4, base_seed=1)
    summary, raw = sweep_ratio(random_tree(1, 30), cfg)
    assert raw["p"].tolist() == [2, 2, 2, 2]
    row = summary.rows[0]
    assert (row.p, row.c, row.e) == (2.0, 1.0, 0.0)
    assert row.sigma_p == 0.0
    assert summary.grand_p == 2.0


def test_sweep_rows_and_seeds():
    cfg = SweepConfig(rho_list=[0.2, 0.5], trials_per_rho=3, base_seed=7)
    _, raw = sweep_ratio(random_tree(2, 50), cfg)
    assert list(raw.columns) == RAW_COLUMNS
    assert raw["rho"].tolist() == [0.2, 0.2, 0.2, 0.5, 0.5, 0.5]
    assert raw["trial"].tolist() == [0, 1, 2, 0, 1, 2]
    assert int(raw["seed"].iloc[4]) == trial_seed(7, 1, 1)
    assert set(raw["scenario"]) == {"plus:0.2", "plus:0.5"}


def test_sweep_independent_of_workers():
    g = random_tree(3, 70)
    cfg = SweepConfig(scenario=ScenarioKind.plus_minus, rho_list=[0.1, 0.3, 0.6], trials_per_rho=4, base_seed=11)
    s1, r1 = sweep_ratio(g, cfg, workers=1)
    s2, r2 = sweep_ratio(g, cfg, workers=2)
    pd.testing.assert_frame_equal(r1, r2)
    assert s1 == s2


def test_single_scenario_sweep_has_one_cell(p5):
    cfg = SweepConfig(scenario=ScenarioKind.single, rho_list=[], trials_per_rho=5, base_seed=3)
    summary, raw = sweep_ratio(p5, cfg)
    assert len(raw) == 5
    assert len(summary.rows) == 1
    assert summary.rows[0].rho is None
    assert raw["scenario"].str.startswith("single:").all()


def test_summary_recomputed_from_raw_rows():
    cfg = SweepConfig(rho_list=[0.1, 0.4], trials_per_rho=6, base_seed=2)
    summary, raw = sweep_ratio(cycle_graph(30), cfg)
    for row in summary.rows:
        group = raw[(raw["rho"] == row.rho) & (raw["termination"] != Termination.budget_exhausted.value)]
        for col in ("p", "c", "e"):
            values = [float(v) for v in group[col]]
            mean = sum(values) / len(values)
            var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            assert getattr(row, col) == pytest.approx(mean, rel=1e-9, abs=1e-12)
            assert getattr(row, f"sigma_{col}") == pytest.approx(var ** 0.5, rel=1e-9, abs=1e-12)


def test_summarize_skips_exhausted_trials():
    raw = pd.DataFrame(
        [
            {"rho": 0.1, "trial": 0, "seed": 1, "scenario": "plus:0.1", "rule": "a0",
             "p": 4, "c": 1, "e": 0, "termination": "absorbing"},
            {"rho": 0.1, "trial": 1, "seed": 2, "scenario": "plus:0.1", "rule": "a0",
             "p": None, "c": None, "e": None, "termination": "budget-exhausted"},
        ]
    )
    row = summarize(raw).rows[0]
    assert (row.n, row.n_exhausted, row.p) == (2, 1, 4.0)


def test_empty_stimulation_in_sweep():
    from actin_automaton.errors import EmptyStimulationError

    cfg = SweepConfig(rho_list=[0.1], trials_per_rho=1)
    with pytest.raises(EmptyStimulationError):
        sweep_ratio(path_graph(5), cfg)


def test_parse_rho_list():
    assert parse_rho_list("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert parse_rho_list("0.05, 0.5") == [0.05, 0.5]
    for bad in ("0.1:0.5", "0.1:0.5:0", "x"):
        with pytest.raises(UsageError):
            parse_rho_list(bad)


def test_render_sweep_table_lists_every_rho():
    cfg = SweepConfig(rho_list=[0.5, 1.0], trials_per_rho=2)
    summary, _ = sweep_ratio(cycle_graph(10), cfg)
    text = render_sweep_table(summary)
    assert "0.5" in text
    assert "1" in text
    assert text.endswith("\n")


# ── power-law fit ────────────────────────────────────────────────

def test_fit_recovers_exact_power_law():
    rhos = [0.1, 0.2, 0.3, 0.5, 0.8]
    fit = fit_power_law([(r, 4.7 * r ** -0.6) for r in rhos])
    assert fit.a == pytest.approx(4.7, abs=1e-9)
    assert fit.b == pytest.approx(-0.6, abs=1e-9)
    assert fit.residual == pytest.approx(0.0, abs=1e-9)
    assert fit.n_points == 5


def test_fit_constant_series():
    fit = fit_power_law([(0.1, 3.0), (0.4, 3.0), (0.9, 3.0)])
    assert fit.b == pytest.approx(0.0, abs=1e-12)
    assert fit.a == pytest.approx(3.0)


@pytest.mark.parametrize("points", [[(0.1, 2.0), (0.2, 1.0)], [(0.1, 2.0), (0.2, 0.0), (0.3, 1.0)]])
def test_fit_rejects_bad_points(points):
    with pytest.raises(FitInputError):
        fit_power_law(points)


def test_fit_points_from_raw_and_summary(tmp_path):
    cfg = SweepConfig(rho_list=[0.2, 0.4, 0.6], trials_per_rho=3, base_seed=4)
    summary, raw = sweep_ratio(random_tree(6, 50), cfg)
    raw.to_csv(tmp_path / "raw.csv", index=False)
    summary.to_frame().to_csv(tmp_path / "summary.csv", index=False)

    from_raw = points_from_csv(tmp_path / "raw.csv")
    from_summary = points_from_csv(tmp_path / "summary.csv")
    assert [r for r, _ in from_raw] == [0.2, 0.4, 0.6]
    assert [r for r, _ in from_summary] == [0.2, 0.4, 0.6]
    assert [p for _, p in from_raw] == pytest.approx([p for _, p in from_summary])


def test_fit_points_need_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n1,2\n")
    with pytest.raises(InputError):
        points_from_csv(path)


# ── re-stimulation profile ───────────────────────────────────────

def test_profile_drop_and_recovery():
    series = [5, 6, 5, 6, 1, 2, 4, 5, 6]
    event = StimulationEvent(step=4, scenario="plus:0.1", stimulated=3, excited_before=6, excited_after=1)
    (window,) = excitation_profile(series, [event], window=4)
    assert window.band == (5, 6)
    assert window.level_before == pytest.approx(5.5)
    assert window.level_min_after == 1
    assert window.drop == pytest.approx(4.5)
    assert window.recovery_steps == 3


def test_profile_skips_stimulation_at_start():
    event = StimulationEvent(step=0, scenario="single:0", stimulated=1, excited_before=0, excited_after=1)
    assert excitation_profile([1, 1, 0], [event]) == []


# ── reference comparison ─────────────────────────────────────────

def test_capacity_reference_values():
    from actin_automaton.rings import memory_capacity

    report = memory_capacity(reference.RING_TOTAL)
    assert report.bits_per_filament == reference.BITS_PER_FILAMENT


def test_compare_fit_passes_reference_law():
    fit = fit_power_law([(r, 4.7 * r ** -0.6) for r in (0.1, 0.3, 0.6, 0.9)])
    comparisons = compare_to_reference(fit)
    assert comparisons
    assert all(c.ok for c in comparisons)
    assert all(not c.gating for c in comparisons)
    assert "4.7" in render_comparisons(comparisons)


def test_single_summary_render(p3):
    summary, _ = sweep_single_node(p3, A0)
    text = render_single_summary(summary)
    assert "nodes_run,3" in text
