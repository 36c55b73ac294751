"""
MolecularGraph: immutable undirected simple graph with optional atom
annotations, plus its canonical text serialization and the atom sidecar.
"""

import io
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import sparse

from actin_automaton.errors import InputError

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".atoms.csv"
SIDECAR_COLUMNS = [
    "id", "serial", "element", "atom_name", "residue_name",
    "residue_seq", "chain", "x", "y", "z",
]

UNKNOWN_ELEMENT = "X"

ELEMENTS = frozenset("""
H HE LI BE B C N O F NE NA MG AL SI P S CL AR K CA SC TI V CR MN FE CO NI
CU ZN GA GE AS SE BR KR RB SR Y ZR NB MO TC RU RH PD AG CD IN SN SB TE I
XE CS BA LA CE PR ND PM SM EU GD TB DY HO ER TM YB LU HF TA W RE OS IR PT
AU HG TL PB BI PO AT RN FR RA AC TH PA U NP PU AM CM BK CF ES FM MD NO LR
D
""".split())


# =========================
# ATOM RECORD
# =========================

@dataclass(frozen=True, slots=True)
class AtomRecord:
    id: int
    element: str
    atom_name: str
    residue_name: str
    residue_seq: int
    chain: str
    position: tuple[float, float, float]
    serial: int = 0

    def __post_init__(self):
        if self.element not in ELEMENTS and self.element != UNKNOWN_ELEMENT:
            raise ValueError(f"Unrecognized element symbol: '{self.element}'")

    @property
    def residue_key(self) -> tuple[str, int, str]:
        return (self.chain, self.residue_seq, self.residue_name)


# =========================
# GRAPH
# =========================

@dataclass(frozen=True, eq=False)
class MolecularGraph:
    """
    Undirected simple graph in CSR form.

    ``indices[indptr[u]:indptr[u+1]]`` are the sorted neighbours of u. The
    graph is never mutated after construction, so it is safe to share
    between threads and to ship to worker processes.
    """

    indptr: np.ndarray
    indices: np.ndarray
    atoms: tuple[AtomRecord, ...] = field(default_factory=tuple)

    # ── construction ──────────────────────────────────────────────

    @classmethod
    def from_edges(cls, node_count: int, edges, atoms=()) -> "MolecularGraph":
        """De-duplicates edges and drops self-loops."""
        if node_count < 0:
            raise ValueError("node_count must be >= 0")

        pairs = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        pairs = pairs.reshape(-1, 2)

        if pairs.size and (pairs.min() < 0 or pairs.max() >= node_count):
            raise ValueError("edge endpoint out of range")

        loops = pairs[:, 0] == pairs[:, 1]
        if loops.any():
            logger.warning("Dropped self-loops | count=%s", int(loops.sum()))
            pairs = pairs[~loops]

        pairs = np.sort(pairs, axis=1)
        if pairs.size:
            pairs = np.unique(pairs, axis=0)

        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]

        counts = np.bincount(rows, minlength=node_count)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])

        atoms = tuple(atoms)
        if atoms and len(atoms) != node_count:
            raise ValueError("atom annotations must cover every node")
        if atoms and any(a.id != i for i, a in enumerate(atoms)):
            raise ValueError("atom ids must be dense 0..N-1")

        indptr.setflags(write=False)
        cols = cols.astype(np.int64)
        cols.setflags(write=False)
        return cls(indptr=indptr, indices=cols, atoms=atoms)

    # ── basic queries ─────────────────────────────────────────────

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def has_annotations(self) -> bool:
        return bool(self.atoms)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def matrix(self) -> sparse.csr_array:
        """Adjacency as an int32 sparse matrix (used for the excited-neighbour count)."""
        data = np.ones(len(self.indices), dtype=np.int32)
        n = self.node_count
        return sparse.csr_array((data, self.indices, self.indptr), shape=(n, n))

    def edges(self) -> np.ndarray:
        """Edge array (M, 2) with u < v, sorted."""
        rows = np.repeat(np.arange(self.node_count), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def is_symmetric(self) -> bool:
        for u in range(self.node_count):
            for v in self.neighbors(u):
                nv = self.neighbors(int(v))
                pos = np.searchsorted(nv, u)
                if pos >= len(nv) or nv[pos] != u:
                    return False
        return True

    def subgraph(self, keep: np.ndarray) -> "MolecularGraph":
        """Induced subgraph on sorted node ids ``keep``, re-indexed densely."""
        keep = np.asarray(keep, dtype=np.int64)
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        e = self.edges()
        e = remap[e]
        e = e[(e >= 0).all(axis=1)]
        atoms = ()
        if self.atoms:
            atoms = tuple(
                _reindex(self.atoms[old], new) for new, old in enumerate(keep.tolist())
            )
        return MolecularGraph.from_edges(len(keep), e, atoms)


def _reindex(atom: AtomRecord, new_id: int) -> AtomRecord:
    return AtomRecord(
        id=new_id,
        element=atom.element,
        atom_name=atom.atom_name,
        residue_name=atom.residue_name,
        residue_seq=atom.residue_seq,
        chain=atom.chain,
        position=atom.position,
        serial=atom.serial,
    )


# ======================================================
# CANONICAL SERIALIZATION
# ======================================================

def to_canonical_text(g: MolecularGraph) -> str:
    buf = io.StringIO()
    buf.write(f"nodes {g.node_count} edges {g.edge_count}\n")
    for u, v in g.edges().tolist():
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def atoms_to_frame(g: MolecularGraph) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "id": a.id,
                "serial": a.serial,
                "element": a.element,
                "atom_name": a.atom_name,
                "residue_name": a.residue_name,
                "residue_seq": a.residue_seq,
                "chain": a.chain,
                "x": a.position[0],
                "y": a.position[1],
                "z": a.position[2],
            }
            for a in g.atoms
        ],
        columns=SIDECAR_COLUMNS,
    )


def sidecar_path(graph_path: str | Path) -> Path:
    graph_path = Path(graph_path)
    return graph_path.with_name(graph_path.name + SIDECAR_SUFFIX)


def read_atom_sidecar(path: str | Path) -> tuple[AtomRecord, ...]:
    try:
        df = pd.read_csv(path, dtype={"chain": str, "atom_name": str, "residue_name": str, "element": str},
                         keep_default_na=False)
    except (OSError, pd.errors.ParserError) as e:
        raise InputError(f"Cannot read atom sidecar '{path}': {e}") from e

    missing = [c for c in SIDECAR_COLUMNS if c not in df.columns]
    if missing:
        raise InputError(f"Atom sidecar missing columns: {', '.join(missing)}")

    df = df.sort_values("id")
    return tuple(
        AtomRecord(
            id=int(r.id),
            element=r.element or UNKNOWN_ELEMENT,
            atom_name=r.atom_name,
            residue_name=r.residue_name,
            residue_seq=int(r.residue_seq),
            chain=r.chain,
            position=(float(r.x), float(r.y), float(r.z)),
            serial=int(r.serial),
        )
        for r in df.itertuples(index=False)
    )
