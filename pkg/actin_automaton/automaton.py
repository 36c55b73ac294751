"""
Synchronous three-state excitable automaton on a graph.

States are uint8 codes (0 resting, 1 excited, 2 refractory). Stepping
works on two plain buffers; the packed two-bit-plane form (2 bits per
node) is what gets stored, fingerprinted and compared.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from actin_automaton.errors import ConfigurationLengthError, EmptyStimulationError, StimulationError
from actin_automaton.models import STATE_CHARS, ExcitationRule, NodeState, Scenario, ScenarioKind
from actin_automaton.molgraph.graph import MolecularGraph

logger = logging.getLogger(__name__)

RESTING = int(NodeState.resting)
EXCITED = int(NodeState.excited)
REFRACTORY = int(NodeState.refractory)

_CHAR_TO_CODE = {c: int(s) for s, c in STATE_CHARS.items()}
_CODE_TO_CHAR = np.array([STATE_CHARS[NodeState(i)] for i in range(3)])

# guards floor(rho * N) against 0.29 * 100 == 28.999999999999996
_FLOOR_EPS = 1e-9


# ======================================================
# PACKING
# ======================================================

def pack(states: np.ndarray) -> bytes:
    return np.packbits(states == EXCITED).tobytes() + np.packbits(states == REFRACTORY).tobytes()


def unpack(data: bytes, node_count: int) -> np.ndarray:
    half = (node_count + 7) // 8
    buf = np.frombuffer(data, dtype=np.uint8)
    excited = np.unpackbits(buf[:half], count=node_count)
    refractory = np.unpackbits(buf[half:], count=node_count)
    return (excited + 2 * refractory).astype(np.uint8)


# ======================================================
# CONFIGURATION
# ======================================================

@dataclass(frozen=True, eq=False)
class Configuration:
    states: np.ndarray
    step: int = 0

    def __post_init__(self):
        states = np.array(self.states, dtype=np.uint8, copy=True).reshape(-1)
        if states.size and states.max() > REFRACTORY:
            raise ValueError("state codes must be 0, 1 or 2")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)

    @classmethod
    def resting(cls, node_count: int, step: int = 0) -> "Configuration":
        return cls(np.zeros(node_count, dtype=np.uint8), step)

    @classmethod
    def from_string(cls, text: str, step: int = 0) -> "Configuration":
        text = text.strip()
        try:
            codes = [_CHAR_TO_CODE[c] for c in text]
        except KeyError as e:
            raise ValueError(f"unknown state character {e}") from e
        return cls(np.array(codes, dtype=np.uint8), step)

    @property
    def node_count(self) -> int:
        return len(self.states)

    def to_string(self) -> str:
        return "".join(_CODE_TO_CHAR[self.states])

    def packed(self) -> bytes:
        return pack(self.states)

    def same_states(self, other: "Configuration") -> bool:
        return np.array_equal(self.states, other.states)

    def with_states(self, nodes, value: int) -> "Configuration":
        states = self.states.copy()
        states[np.asarray(nodes, dtype=np.int64)] = value
        return Configuration(states, self.step)


def excited_count(cfg: Configuration) -> int:
    return int(np.count_nonzero(cfg.states == EXCITED))


def state_census(cfg: Configuration) -> tuple[int, int, int]:
    """(n_resting, n_excited, n_refractory)"""
    counts = np.bincount(cfg.states, minlength=3)
    return int(counts[0]), int(counts[1]), int(counts[2])


# ======================================================
# STEPPING
# ======================================================

class Stepper:
    """Double-buffered update kernel bound to one graph and rule."""

    def __init__(self, g: MolecularGraph, rule: ExcitationRule):
        self.node_count = g.node_count
        self.matrix = g.matrix
        self.lo = rule.lo
        self.hi = rule.hi
        self._excited = np.zeros(self.node_count, dtype=np.int32)

    def advance(self, src: np.ndarray, dst: np.ndarray) -> None:
        """Write the successor of ``src`` into ``dst`` (distinct buffers)."""
        excited = src == EXCITED
        np.copyto(self._excited, excited)
        sigma = self.matrix @ self._excited

        fire = (src == RESTING) & (sigma >= self.lo)
        if self.hi is not None:
            fire &= sigma <= self.hi

        dst.fill(RESTING)
        dst[fire] = EXCITED
        dst[excited] = REFRACTORY


def step(g: MolecularGraph, rule: ExcitationRule, cfg: Configuration) -> Configuration:
    if cfg.node_count != g.node_count:
        raise ConfigurationLengthError(
            f"Configuration has {cfg.node_count} nodes, graph has {g.node_count}"
        )
    out = np.empty(g.node_count, dtype=np.uint8)
    Stepper(g, rule).advance(cfg.states, out)
    return Configuration(out, cfg.step + 1)


# ======================================================
# STIMULATION
# ======================================================

def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Platform-independent generator for (seed, stream)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def stimulated_count(scenario: Scenario, node_count: int) -> int:
    if scenario.kind == ScenarioKind.single:
        return 1
    return int(math.floor(scenario.rho * node_count + _FLOOR_EPS))


def select_nodes(scenario: Scenario, node_count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Chosen node ids and the state each one is forced into."""
    if scenario.kind == ScenarioKind.single:
        if scenario.node >= node_count:
            raise StimulationError(f"Node {scenario.node} out of range for {node_count} nodes")
        return np.array([scenario.node], dtype=np.int64), np.array([EXCITED], dtype=np.uint8)

    k = stimulated_count(scenario, node_count)
    if k == 0:
        raise EmptyStimulationError(
            f"rho={scenario.rho:g} selects no node out of {node_count}"
        )

    nodes = rng.permutation(node_count)[:k].astype(np.int64)
    if scenario.kind == ScenarioKind.plus:
        values = np.full(k, EXCITED, dtype=np.uint8)
    else:
        coins = rng.integers(0, 2, size=k)
        values = np.where(coins == 0, EXCITED, REFRACTORY).astype(np.uint8)
    return nodes, values


def stimulate(cfg: Configuration, scenario: Scenario, rng: np.random.Generator) -> Configuration:
    """
    Force the selected nodes into their new states whatever they were;
    every other node keeps its state.
    """
    nodes, values = select_nodes(scenario, cfg.node_count, rng)
    states = cfg.states.copy()
    states[nodes] = values
    logger.debug("Stimulated | scenario=%s nodes=%s step=%s", scenario.label, len(nodes), cfg.step)
    return Configuration(states, cfg.step)
