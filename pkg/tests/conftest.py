import math
from pathlib import Path

import pytest

from actin_automaton.molgraph.graph import MolecularGraph


# ── graph builders ───────────────────────────────────────────────

def path_graph(n: int) -> MolecularGraph:
    return MolecularGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> MolecularGraph:
    return MolecularGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def write_edges(path: Path, edges, header: int | None = None) -> Path:
    lines = []
    if header is not None:
        lines.append(f"nodes {header} edges {len(edges)}")
    lines += [f"{u} {v}" for u, v in edges]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def two_hexagons():
    # nodes 0-5 and 6-11, bridged by the edge 3-6
    edges = [(i, (i + 1) % 6) for i in range(6)]
    edges += [(6 + i, 6 + (i + 1) % 6) for i in range(6)]
    edges.append((3, 6))
    return MolecularGraph.from_edges(12, edges)


@pytest.fixture
def hexagon_with_tail():
    """C6 with the pendant path 6-7-8 hanging off node 2."""
    edges = [(i, (i + 1) % 6) for i in range(6)] + [(2, 6), (6, 7), (7, 8)]
    return MolecularGraph.from_edges(9, edges)


# ── structure file ───────────────────────────────────────────────

def _atom_line(serial, name, resname, chain, resseq, x, y, z, element) -> str:
    padded = f" {name:<3}" if len(name) < 4 else name
    return (
        f"{'ATOM':<6}{serial:>5} {padded:<4} {resname:>3} {chain:1}{resseq:>4}    "
        f"{x:>8.3f}{y:>8.3f}{z:>8.3f}{1.0:>6.2f}{0.0:>6.2f}          {element:>2}"
    )


def _polygon(names, side, cx):
    radius = side / (2 * math.sin(math.pi / len(names)))
    step = 2 * math.pi / len(names)
    return [
        (name, cx + radius * math.cos(k * step), radius * math.sin(k * step))
        for k, name in enumerate(names)
    ]


def aromatic_pdb_text() -> str:
    """
    One PHE (ids 0-6, CB last) and one HIS (ids 7-12, CB last), far apart.
    Bonds come from distance inference only.
    """
    lines = []
    serial = 1
    residues = [
        ("PHE", 1, ["CG", "CD1", "CE1", "CZ", "CE2", "CD2"], 1.39, 0.0),
        ("HIS", 2, ["CG", "ND1", "CE1", "NE2", "CD2"], 1.38, 20.0),
    ]
    for resname, resseq, names, side, cx in residues:
        ring = _polygon(names, side, cx)
        for name, x, y in ring:
            lines.append(_atom_line(serial, name, resname, "A", resseq, x, y, 0.0, name[0]))
            serial += 1
        cg_x = ring[0][1]
        lines.append(_atom_line(serial, "CB", resname, "A", resseq, cg_x + 1.51, 0.0, 0.0, "C"))
        serial += 1
    lines.append("END")
    return "\n".join(lines) + "\n"


@pytest.fixture
def aromatic_pdb(tmp_path):
    path = tmp_path / "mini.pdb"
    path.write_text(aromatic_pdb_text())
    return path
