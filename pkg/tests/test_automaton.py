import numpy as np
import pytest

from actin_automaton.automaton import (
    EXCITED,
    REFRACTORY,
    RESTING,
    Configuration,
    excited_count,
    make_rng,
    pack,
    select_nodes,
    state_census,
    step,
    stimulate,
    stimulated_count,
    unpack,
)
from actin_automaton.errors import ConfigurationLengthError, EmptyStimulationError, StimulationError, UsageError
from actin_automaton.models import ExcitationRule, Scenario, ScenarioKind, Termination
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.trajectory import run_to_attractor
from conftest import cycle_graph


def random_graph(rng, n, p=0.3):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return MolecularGraph.from_edges(n, edges)


def bounded_degree_graph(rng, n, max_degree=4, p=0.4):
    degree = [0] * n
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if degree[u] < max_degree and degree[v] < max_degree and rng.random() < p:
                edges.append((u, v))
                degree[u] += 1
                degree[v] += 1
    return MolecularGraph.from_edges(n, edges)


def reference_step(g, rule, states):
    out = np.zeros_like(states)
    for u in range(g.node_count):
        if states[u] == EXCITED:
            out[u] = REFRACTORY
        elif states[u] == REFRACTORY:
            out[u] = RESTING
        else:
            sigma = sum(1 for v in g.neighbors(u) if states[v] == EXCITED)
            fires = sigma >= rule.lo and (rule.hi is None or sigma <= rule.hi)
            out[u] = EXCITED if fires else RESTING
    return out


# ── stepping ─────────────────────────────────────────────────────

def test_excited_and_refractory_transitions_are_unconditional():
    rng = np.random.default_rng(11)
    g = random_graph(rng, 30, 0.2)
    for rule in (ExcitationRule.a0(), ExcitationRule.a1()):
        for _ in range(5000):
            cfg = Configuration(rng.integers(0, 3, size=g.node_count))
            nxt = step(g, rule, cfg)
            assert np.all(nxt.states[cfg.states == EXCITED] == REFRACTORY)
            assert np.all(nxt.states[cfg.states == REFRACTORY] == RESTING)


def test_step_matches_per_node_rule():
    rng = np.random.default_rng(3)
    rules = [ExcitationRule.a0(), ExcitationRule.a1(), ExcitationRule(lo=2, hi=3), ExcitationRule(lo=2)]
    for _ in range(200):
        g = random_graph(rng, int(rng.integers(1, 15)), 0.35)
        rule = rules[int(rng.integers(len(rules)))]
        cfg = Configuration(rng.integers(0, 3, size=g.node_count))
        assert np.array_equal(step(g, rule, cfg).states, reference_step(g, rule, cfg.states))


def test_a1_blocks_doubly_excited_node():
    g = MolecularGraph.from_edges(3, [(0, 1), (1, 2)])
    cfg = Configuration.from_string("+o+")
    assert step(g, ExcitationRule.a1(), cfg).to_string() == "-o-"
    assert step(g, ExcitationRule.a0(), cfg).to_string() == "-+-"


def test_single_seed_dies_out_under_two_neighbour_threshold():
    # one excited node never gives a neighbour two excited inputs
    rng = np.random.default_rng(404)
    rule = ExcitationRule(lo=2)
    for _ in range(300):
        g = bounded_degree_graph(rng, int(rng.integers(2, 25)))
        assert g.degrees.max(initial=0) <= 4
        for node in range(g.node_count):
            cfg = Configuration.resting(g.node_count).with_states([node], EXCITED)
            r = run_to_attractor(g, rule, cfg)
            assert r.termination == Termination.absorbing
            assert r.transient_p <= 2


def test_step_advances_step_counter():
    cfg = Configuration.from_string("+oooo-", step=7)
    assert step(cycle_graph(6), ExcitationRule.a0(), cfg).step == 8


def test_step_rejects_length_mismatch():
    with pytest.raises(ConfigurationLengthError):
        step(cycle_graph(6), ExcitationRule.a0(), Configuration.resting(5))


# ── configurations ───────────────────────────────────────────────

def test_string_codec():
    cfg = Configuration.from_string("o+-o\n")
    assert cfg.states.tolist() == [RESTING, EXCITED, REFRACTORY, RESTING]
    assert cfg.to_string() == "o+-o"


def test_from_string_rejects_unknown_character():
    with pytest.raises(ValueError) as exc:
        Configuration.from_string("o+x")
    assert isinstance(exc.value.__cause__, KeyError)


def test_rule_parse_keeps_cause():
    with pytest.raises(UsageError) as exc:
        ExcitationRule.parse("2:x")
    assert isinstance(exc.value.__cause__, ValueError)


def test_states_are_read_only():
    cfg = Configuration.from_string("o+-")
    with pytest.raises(ValueError):
        cfg.states[0] = EXCITED


def test_pack_unpack_odd_length():
    rng = np.random.default_rng(5)
    for n in (1, 7, 8, 9, 61):
        states = rng.integers(0, 3, size=n).astype(np.uint8)
        assert len(pack(states)) == 2 * ((n + 7) // 8)
        assert np.array_equal(unpack(pack(states), n), states)


def test_state_census():
    assert state_census(Configuration.from_string("o++--o-")) == (2, 2, 3)
    assert excited_count(Configuration.from_string("o++--o-")) == 2


# ── stimulation ──────────────────────────────────────────────────

def test_stimulated_count_floors():
    assert stimulated_count(Scenario(kind=ScenarioKind.plus, rho=0.29), 100) == 29
    assert stimulated_count(Scenario(kind=ScenarioKind.plus, rho=0.05), 30) == 1
    assert stimulated_count(Scenario(kind=ScenarioKind.single, node=3), 30) == 1


def test_plus_selects_distinct_nodes():
    nodes, values = select_nodes(Scenario(kind=ScenarioKind.plus, rho=0.5), 40, make_rng(9))
    assert len(nodes) == 20
    assert len(set(nodes.tolist())) == 20
    assert set(values.tolist()) == {EXCITED}


def test_plus_minus_uses_both_states():
    _, values = select_nodes(Scenario(kind=ScenarioKind.plus_minus, rho=1.0), 200, make_rng(1))
    assert set(values.tolist()) == {EXCITED, REFRACTORY}


@pytest.mark.parametrize("seed", range(5))
def test_plus_minus_half_of_hundred(seed):
    scenario = Scenario(kind=ScenarioKind.plus_minus, rho=0.5)
    assert stimulated_count(scenario, 100) == 50
    cfg = stimulate(Configuration.resting(100), scenario, make_rng(seed))
    resting, excited, refractory = state_census(cfg)
    assert excited + refractory == 50
    assert resting == 50


def test_selection_is_reproducible_per_seed_and_stream():
    s = Scenario(kind=ScenarioKind.plus, rho=0.3)
    a, _ = select_nodes(s, 100, make_rng(42, 0))
    b, _ = select_nodes(s, 100, make_rng(42, 0))
    c, _ = select_nodes(s, 100, make_rng(42, 1))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_empty_stimulation_raises():
    with pytest.raises(EmptyStimulationError):
        select_nodes(Scenario(kind=ScenarioKind.plus, rho=0.05), 10, make_rng(0))


def test_single_node_out_of_range():
    with pytest.raises(StimulationError):
        select_nodes(Scenario(kind=ScenarioKind.single, node=10), 10, make_rng(0))


def test_stimulate_overrides_only_chosen_nodes():
    cfg = Configuration.from_string("-" * 10)
    out = stimulate(cfg, Scenario(kind=ScenarioKind.plus, rho=0.3), make_rng(2))
    assert out.to_string().count("+") == 3
    assert out.to_string().count("-") == 7
    assert cfg.to_string() == "-" * 10
