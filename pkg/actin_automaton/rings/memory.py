"""
Rings as one-bit memory cells.

A bit is a travelling wave: one excited ring node with a refractory node
behind it. Writing places the wave on a resting ring, erasing floods the
remaining resting ring nodes so the wave has nowhere to go.
"""

import itertools
import logging

import numpy as np
from pydantic import BaseModel

from actin_automaton.automaton import EXCITED, REFRACTORY, RESTING, Configuration, Stepper
from actin_automaton.errors import RingStateError
from actin_automaton.models import EraseMode, ExcitationRule, Termination
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.rings.perception import Ring
from actin_automaton.trajectory import run_to_attractor
from actin_automaton.utils.pool import map_ordered

logger = logging.getLogger(__name__)

MIN_TOLERANCE_RING = 4
MAX_TOLERANCE_RING = 12


# =========================
# RING GRAPHS
# =========================

def cycle_graph(n: int) -> MolecularGraph:
    return MolecularGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def cycle_ring(n: int) -> Ring:
    return Ring(nodes=tuple(range(n)))


# ======================================================
# WRITE / ERASE
# ======================================================

def write_bit(cfg: Configuration, ring: Ring, phase: int) -> Configuration:
    """Excite ring node ``phase`` and make its cyclic predecessor refractory."""
    if not 0 <= phase < ring.size:
        raise RingStateError(f"Phase {phase} out of range for a {ring.size}-ring")

    nodes = np.asarray(ring.nodes)
    if np.any(cfg.states[nodes] != RESTING):
        raise RingStateError("Ring already holds a bit (not all ring nodes resting)")

    states = cfg.states.copy()
    states[ring.nodes[phase]] = EXCITED
    states[ring.nodes[phase - 1]] = REFRACTORY
    return Configuration(states, cfg.step)


def wave_phase(cfg: Configuration, ring: Ring) -> int | None:
    """Ring index of the wave head, or None when the ring is not in single-wave form."""
    ring_states = cfg.states[np.asarray(ring.nodes)]
    excited = np.flatnonzero(ring_states == EXCITED)
    refractory = np.flatnonzero(ring_states == REFRACTORY)
    if len(excited) != 1 or len(refractory) != 1:
        return None
    head, tail = int(excited[0]), int(refractory[0])
    if (head - tail) % ring.size not in (1, ring.size - 1):
        return None
    return head


def erase_bit(cfg: Configuration, ring: Ring, mode: EraseMode) -> Configuration:
    if wave_phase(cfg, ring) is None:
        raise RingStateError("Ring does not carry a single travelling wave")

    value = EXCITED if EraseMode(mode) == EraseMode.excite_all_resting else REFRACTORY
    states = cfg.states.copy()
    for u in ring.nodes:
        if states[u] == RESTING:
            states[u] = value
    return Configuration(states, cfg.step)


# ======================================================
# NOISE TOLERANCE
# ======================================================

class Perturbation(BaseModel):
    phase: int
    nodes: list[int]
    termination: Termination
    transient_p: int | None = None
    cycle_c: int | None = None


class NoiseToleranceReport(BaseModel):
    ring_size: int
    in_situ: bool
    phases: int
    single_cases: int
    pair_cases: int
    wave_persistent: bool
    counterexamples: list[Perturbation]
    regeneration_failures: list[Perturbation]
    erase_failures: list[Perturbation]

    @property
    def single_counterexamples(self) -> list[Perturbation]:
        return [c for c in self.counterexamples if len(c.nodes) == 1]

    @property
    def pair_counterexamples(self) -> list[Perturbation]:
        return [c for c in self.counterexamples if len(c.nodes) == 2]


def _has_wave(states: np.ndarray, ring: Ring) -> bool:
    n = ring.size
    ring_states = states[np.asarray(ring.nodes)]
    for i in range(n):
        if ring_states[i] != EXCITED:
            continue
        behind, ahead = ring_states[i - 1], ring_states[(i + 1) % n]
        if (behind == REFRACTORY and ahead == RESTING) or (ahead == REFRACTORY and behind == RESTING):
            return True
    return False


def _regenerates(stepper: Stepper, states: np.ndarray, ring: Ring) -> bool:
    cur = states.copy()
    nxt = np.empty_like(cur)
    for _ in range(ring.size):
        stepper.advance(cur, nxt)
        cur, nxt = nxt, cur
        if _has_wave(cur, ring):
            return True
    return False


def _check_phase(args) -> dict:
    g, ring, phase, rule = args
    stepper = Stepper(g, rule)
    base = write_bit(Configuration.resting(g.node_count), ring, phase)
    resting = [u for i, u in enumerate(ring.nodes) if i not in (phase, (phase - 1) % ring.size)]

    def outcome(nodes, cfg):
        r = run_to_attractor(g, rule, cfg)
        return r, Perturbation(phase=phase, nodes=list(nodes), termination=r.termination,
                               transient_p=r.transient_p, cycle_c=r.cycle_c)

    undisturbed = run_to_attractor(g, rule, base)
    persistent = (
        undisturbed.termination == Termination.limit_cycle
        and undisturbed.transient_p == 0
        and undisturbed.cycle_c == ring.size
        and undisturbed.excitation_e == 1
    )

    counterexamples, regeneration_failures, erase_failures = [], [], []
    singles = pairs = 0
    for k in (1, 2):
        for nodes in itertools.combinations(resting, k):
            cfg = base.with_states(nodes, EXCITED)
            r, case = outcome(nodes, cfg)
            if k == 1:
                singles += 1
                if not _regenerates(stepper, cfg.states, ring):
                    regeneration_failures.append(case)
            else:
                pairs += 1
            if r.termination == Termination.absorbing:
                counterexamples.append(case)

    for mode in EraseMode:
        cfg = erase_bit(base, ring, mode)
        r, case = outcome(resting, cfg)
        if r.termination != Termination.absorbing:
            erase_failures.append(case)

    return {
        "persistent": persistent,
        "singles": singles,
        "pairs": pairs,
        "counterexamples": counterexamples,
        "regeneration_failures": regeneration_failures,
        "erase_failures": erase_failures,
    }


def check_noise_tolerance(
    ring_size: int | None = None,
    *,
    g: MolecularGraph | None = None,
    ring: Ring | None = None,
    rule: ExcitationRule | None = None,
    workers: int = 1,
) -> NoiseToleranceReport:
    """
    Excite every single resting ring node and every pair of them, at every
    wave phase, and run each case to its attractor. A case that reaches the
    absorbing state is a counterexample: the bit was lost.

    With ``g`` and ``ring`` the checks run in situ on the full graph;
    otherwise on an isolated cycle of ``ring_size`` nodes.
    """
    rule = rule or ExcitationRule.a0()
    in_situ = g is not None
    if in_situ:
        if ring is None:
            raise ValueError("in-situ check needs the ring to perturb")
        ring_size = ring.size
    else:
        if ring_size is None or not MIN_TOLERANCE_RING <= ring_size <= MAX_TOLERANCE_RING:
            raise RingStateError(
                f"Ring size must be in [{MIN_TOLERANCE_RING}, {MAX_TOLERANCE_RING}], got {ring_size}"
            )
        g, ring = cycle_graph(ring_size), cycle_ring(ring_size)

    tasks = [(g, ring, phase, rule) for phase in range(ring.size)]
    parts = map_ordered(_check_phase, tasks, workers)

    report = NoiseToleranceReport(
        ring_size=ring_size,
        in_situ=in_situ,
        phases=ring.size,
        single_cases=sum(p["singles"] for p in parts),
        pair_cases=sum(p["pairs"] for p in parts),
        wave_persistent=all(p["persistent"] for p in parts),
        counterexamples=[c for p in parts for c in p["counterexamples"]],
        regeneration_failures=[c for p in parts for c in p["regeneration_failures"]],
        erase_failures=[c for p in parts for c in p["erase_failures"]],
    )
    if report.counterexamples:
        logger.warning(
            "Bit lost under perturbation | ring_size=%s in_situ=%s counterexamples=%s",
            ring_size, in_situ, len(report.counterexamples),
        )
    return report


# ======================================================
# GENERATOR DEMO
# ======================================================

class GeneratorReport(BaseModel):
    ring_nodes: list[int]
    attachments: list[int]
    phase: int
    steps: int
    escape_step: int | None
    escape_node: int | None
    series: list[int]


def generator_demo(
    g: MolecularGraph,
    ring: Ring,
    steps: int,
    *,
    phase: int = 0,
    rule: ExcitationRule | None = None,
    on_step=None,
) -> GeneratorReport:
    """
    Write a bit on ``ring`` inside the resting graph and evolve the whole
    graph for ``steps`` steps. ``escape_step`` is the first step at which a
    node outside the ring is excited.
    """
    rule = rule or ExcitationRule.a0()
    if not ring.attachments:
        logger.warning("Ring has no attachment nodes, excitation stays on the ring | ring=%s", ring.nodes)

    cfg = write_bit(Configuration.resting(g.node_count), ring, phase)
    outside = np.ones(g.node_count, dtype=bool)
    outside[np.asarray(ring.nodes)] = False

    stepper = Stepper(g, rule)
    cur = cfg.states.copy()
    nxt = np.empty_like(cur)
    series = [int(np.count_nonzero(cur == EXCITED))]
    escape_step = escape_node = None
    if on_step is not None:
        on_step(0, cur)

    for t in range(1, steps + 1):
        stepper.advance(cur, nxt)
        cur, nxt = nxt, cur
        series.append(int(np.count_nonzero(cur == EXCITED)))
        if on_step is not None:
            on_step(t, cur)
        if escape_step is None:
            escaped = np.flatnonzero(outside & (cur == EXCITED))
            if escaped.size:
                escape_step, escape_node = t, int(escaped[0])
                logger.info("Excitation left the ring | step=%s node=%s", t, escape_node)

    return GeneratorReport(
        ring_nodes=list(ring.nodes),
        attachments=list(ring.attachments),
        phase=phase,
        steps=steps,
        escape_step=escape_step,
        escape_node=escape_node,
        series=series,
    )
