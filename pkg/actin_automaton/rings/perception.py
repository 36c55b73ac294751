"""
Aromatic ring perception.

Rings are chordless 5- and 6-cycles. With atom annotations a cycle is kept
only when all of its atoms belong to one residue and their names match a
canonical aromatic atom set; without annotations every chordless 5/6-cycle
is returned unclassified.
"""

import logging
from dataclasses import dataclass

import networkx as nx
from pydantic import BaseModel

from actin_automaton.models import CountMode
from actin_automaton.molgraph.graph import MolecularGraph

logger = logging.getLogger(__name__)

RING_SIZES = (5, 6)

AROMATIC_SETS: dict[str, list[tuple[str, frozenset[str]]]] = {
    "HIS": [("HIS", frozenset({"CG", "ND1", "CD2", "CE1", "NE2"}))],
    "PHE": [("PHE", frozenset({"CG", "CD1", "CD2", "CE1", "CE2", "CZ"}))],
    "TYR": [("TYR", frozenset({"CG", "CD1", "CD2", "CE1", "CE2", "CZ"}))],
    "TRP": [
        ("TRP5", frozenset({"CG", "CD1", "NE1", "CE2", "CD2"})),
        ("TRP6", frozenset({"CD2", "CE2", "CE3", "CZ2", "CZ3", "CH2"})),
    ],
}
# protonation-state variants seen in MD-prepared structures
RESIDUE_ALIASES = {"HID": "HIS", "HIE": "HIS", "HIP": "HIS", "HSD": "HIS", "HSE": "HIS", "HSP": "HIS"}

CENSUS_RESIDUES = ("HIS", "PHE", "TRP", "TYR")


# =========================
# TYPES
# =========================

@dataclass(frozen=True)
class Ring:
    nodes: tuple[int, ...]
    residue_name: str = ""
    residue_seq: int = 0
    chain: str = ""
    kind: str | None = None
    attachments: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def classified(self) -> bool:
        return self.kind is not None

    def index_of(self, node: int) -> int:
        return self.nodes.index(node)

    def sort_key(self):
        return (self.chain, self.residue_seq, self.size, self.nodes)


class RingCensus(BaseModel):
    counts: dict[str, int]
    total: int
    count_mode: CountMode

    def to_rows(self) -> list[tuple[str, int]]:
        return list(self.counts.items()) + [("total", self.total)]


# ======================================================
# HELPERS
# ======================================================

def canonical_order(cycle) -> tuple[int, ...]:
    """Rotate to the smallest id, then walk towards its smaller ring neighbour."""
    cycle = [int(v) for v in cycle]
    i = cycle.index(min(cycle))
    rotated = cycle[i:] + cycle[:i]
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def is_chordless_cycle(g: MolecularGraph, nodes) -> bool:
    n = len(nodes)
    if n < 3 or len(set(nodes)) != n:
        return False
    members = set(nodes)
    for i, u in enumerate(nodes):
        ring_neighbours = {v for v in g.neighbors(u).tolist() if v in members}
        if ring_neighbours != {nodes[i - 1], nodes[(i + 1) % n]}:
            return False
    return True


def attachments_of(g: MolecularGraph, nodes) -> tuple[int, ...]:
    members = set(nodes)
    return tuple(
        u for u in nodes
        if any(int(v) not in members for v in g.neighbors(u))
    )


def to_networkx(g: MolecularGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.node_count))
    G.add_edges_from(g.edges().tolist())
    return G


def _classify(g: MolecularGraph, nodes: tuple[int, ...]) -> tuple[str, int, str, str] | None:
    atoms = [g.atoms[u] for u in nodes]
    keys = {a.residue_key for a in atoms}
    if len(keys) != 1:
        return None
    chain, seq, resname = keys.pop()
    resname = RESIDUE_ALIASES.get(resname, resname)
    names = frozenset(a.atom_name for a in atoms)
    for kind, expected in AROMATIC_SETS.get(resname, ()):
        if names == expected:
            return resname, seq, chain, kind
    return None


# ======================================================
# FIND_RINGS
# ======================================================

def find_rings(g: MolecularGraph, classify: bool = True) -> list[Ring]:
    """
    All aromatic rings of ``g``. ``classify=False`` (or a graph without
    atom annotations) returns every chordless 5/6-cycle unclassified.
    """
    classify = classify and g.has_annotations
    G = to_networkx(g)

    rings = []
    for cycle in nx.chordless_cycles(G, length_bound=max(RING_SIZES)):
        if len(cycle) not in RING_SIZES:
            continue
        nodes = canonical_order(cycle)
        if not is_chordless_cycle(g, nodes):
            raise AssertionError(f"chordless cycle check failed for {nodes}")

        if classify:
            label = _classify(g, nodes)
            if label is None:
                continue
            resname, seq, chain, kind = label
            rings.append(Ring(nodes, resname, seq, chain, kind, attachments_of(g, nodes)))
        else:
            rings.append(Ring(nodes, attachments=attachments_of(g, nodes)))

    rings.sort(key=Ring.sort_key)
    logger.info("Rings perceived | count=%s classified=%s", len(rings), classify)
    return rings


# ======================================================
# CENSUS
# ======================================================

def census(rings: list[Ring], count_mode: CountMode = CountMode.rings) -> RingCensus:
    """
    Per-residue ring counts. In ``residues`` mode a tryptophan residue counts
    once even though it carries two fused rings.
    """
    counts = {name: 0 for name in CENSUS_RESIDUES}
    seen_trp = set()
    unclassified = 0

    for ring in rings:
        if not ring.classified:
            unclassified += 1
            continue
        if ring.residue_name == "TRP" and count_mode == CountMode.residues:
            key = (ring.chain, ring.residue_seq)
            if key in seen_trp:
                continue
            seen_trp.add(key)
        counts[ring.residue_name] += 1

    if unclassified:
        counts["unclassified"] = unclassified
    return RingCensus(counts=counts, total=sum(counts.values()), count_mode=count_mode)
