import logging
import re
from pathlib import Path

from actin_automaton.errors import InputError
from actin_automaton.molgraph.graph import MolecularGraph, read_atom_sidecar, sidecar_path

logger = logging.getLogger(__name__)

HEADER = re.compile(r"^nodes\s+(\d+)\s+edges\s+(\d+)\s*$")

STRUCTURE_SUFFIXES = {".pdb", ".ent"}


def load_edge_list(path: str | Path) -> MolecularGraph:
    """
    Whitespace-separated "u v" pairs, '#' comments, blank lines ignored.

    A canonical ``nodes N edges M`` header fixes the node count so isolated
    trailing nodes survive a round trip; without it nodes are 0..max-id.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read edge list '{path}': {getattr(e, 'strerror', None) or e}") from e

    declared_nodes: int | None = None
    edges: list[tuple[int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        header = HEADER.match(line)
        if header and declared_nodes is None and not edges:
            declared_nodes = int(header.group(1))
            continue

        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"Malformed edge on line {lineno}: '{raw.strip()}'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise InputError(f"Malformed edge on line {lineno}: '{raw.strip()}'") from e
        if u < 0 or v < 0:
            raise InputError(f"Negative node id on line {lineno}: '{raw.strip()}'")
        edges.append((u, v))

    max_id = max((max(e) for e in edges), default=-1)
    if declared_nodes is not None:
        if max_id >= declared_nodes:
            raise InputError(f"Edge references node {max_id} but header declares {declared_nodes} nodes")
        node_count = declared_nodes
    else:
        node_count = max_id + 1

    atoms = ()
    sidecar = sidecar_path(path)
    if sidecar.is_file():
        atoms = read_atom_sidecar(sidecar)
        if len(atoms) != node_count:
            logger.warning(
                "Atom sidecar ignored | path=%s atoms=%s nodes=%s", sidecar, len(atoms), node_count
            )
            atoms = ()

    return MolecularGraph.from_edges(node_count, edges, atoms)


def load_graph(path: str | Path, **structure_options) -> MolecularGraph:
    """Structure files by suffix, everything else as an edge list."""
    from actin_automaton.molgraph.structure import load_structure

    path = Path(path)
    if not path.exists():
        raise InputError(f"Graph file not found: '{path}'")
    if path.suffix.lower() in STRUCTURE_SUFFIXES:
        return load_structure(path, **structure_options)
    return load_edge_list(path)
