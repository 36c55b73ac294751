from actin_automaton.molgraph.edgelist import load_edge_list, load_graph
from actin_automaton.molgraph.graph import (
    AtomRecord,
    MolecularGraph,
    atoms_to_frame,
    sidecar_path,
    to_canonical_text,
)
from actin_automaton.molgraph.stats import GraphStats, compute_stats
from actin_automaton.molgraph.structure import load_structure

__all__ = [
    "AtomRecord",
    "GraphStats",
    "MolecularGraph",
    "atoms_to_frame",
    "compute_stats",
    "load_edge_list",
    "load_graph",
    "load_structure",
    "sidecar_path",
    "to_canonical_text",
]
