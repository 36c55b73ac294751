"""
Structure-file ingestion (ATOM/HETATM fixed columns + CONECT records).

Bonds come from explicit connectivity, from covalent-radius distance
inference, or from both.
"""

import logging
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from actin_automaton.errors import InputError
from actin_automaton.models import BondMode
from actin_automaton.molgraph.graph import ELEMENTS, UNKNOWN_ELEMENT, AtomRecord, MolecularGraph

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 0.45

# Single-bond covalent radii, Angstrom.
COVALENT_RADII: dict[str, float] = {
    "H": 0.31, "D": 0.31, "B": 0.84, "C": 0.76, "N": 0.71, "O": 0.66,
    "F": 0.57, "NA": 1.66, "MG": 1.41, "SI": 1.11, "P": 1.07, "S": 1.05,
    "CL": 1.02, "K": 2.03, "CA": 1.76, "MN": 1.39, "FE": 1.32, "CO": 1.26,
    "NI": 1.24, "CU": 1.32, "ZN": 1.22, "SE": 1.20, "BR": 1.20, "I": 1.39,
}
UNKNOWN_RADIUS = 0.77

HYDROGENS = {"H", "D"}


# ======================================================
# RECORD PARSING
# ======================================================

def _element_from_name(atom_name: str) -> str:
    letters = "".join(ch for ch in atom_name.strip() if ch.isalpha()).upper()
    if not letters:
        return UNKNOWN_ELEMENT
    # 4-character hydrogen names (HG21, 1HD1) fill the whole column
    if letters[0] == "H" and (atom_name[:1].isdigit() or len(atom_name.strip()) == 4):
        return "H"
    # Two-letter symbols only when the name is left-justified in the column.
    if len(letters) >= 2 and not atom_name.startswith(" ") and letters[:2] in ELEMENTS:
        return letters[:2]
    return letters[0] if letters[0] in ELEMENTS else UNKNOWN_ELEMENT


def _parse_atom_line(line: str, lineno: int) -> dict:
    line = line.rstrip("\n").ljust(80)
    try:
        serial = int(line[6:11])
        x, y, z = float(line[30:38]), float(line[38:46]), float(line[46:54])
    except ValueError as e:
        raise InputError(f"Malformed atom record on line {lineno}") from e

    atom_name = line[12:16]
    element = line[76:78].strip().upper() or _element_from_name(atom_name)
    if element not in ELEMENTS:
        element = UNKNOWN_ELEMENT

    res_seq = line[22:26].strip()
    return {
        "serial": serial,
        "atom_name": atom_name.strip(),
        "alt_loc": line[16].strip(),
        "residue_name": line[17:20].strip(),
        "chain": line[21].strip(),
        "residue_seq": int(res_seq) if res_seq.lstrip("-").isdigit() else 0,
        "insertion": line[26].strip(),
        "position": (x, y, z),
        "element": element,
    }


def _parse_conect_line(line: str) -> list[tuple[int, int]]:
    line = line.rstrip("\n")
    try:
        source = int(line[6:11])
    except ValueError:
        return []
    pairs = []
    for start in range(11, 31, 5):
        field = line[start:start + 5].strip()
        if field.isdigit():
            pairs.append((source, int(field)))
    return pairs


def read_structure_records(path: str | Path) -> tuple[list[dict], list[tuple[int, int]]]:
    """Atom records of the first model plus raw CONECT serial pairs."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as e:
        raise InputError(f"Cannot read structure file '{path}': {e.strerror or e}") from e

    atoms: list[dict] = []
    conect: list[tuple[int, int]] = []
    seen: set[tuple] = set()
    alt_skipped = 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        record = line[:6].strip().upper()
        if record == "ENDMDL":
            # first model only
            conect_tail = [l for l in text.splitlines()[lineno:] if l.startswith("CONECT")]
            for tail in conect_tail:
                conect.extend(_parse_conect_line(tail))
            break
        if record in ("ATOM", "HETATM"):
            rec = _parse_atom_line(line, lineno)
            key = (rec["chain"], rec["residue_seq"], rec["insertion"], rec["residue_name"], rec["atom_name"])
            if key in seen:
                alt_skipped += 1
                continue
            seen.add(key)
            atoms.append(rec)
        elif record == "CONECT":
            conect.extend(_parse_conect_line(line))

    if alt_skipped:
        logger.info("Alternate locations resolved | kept=first skipped=%s", alt_skipped)

    return atoms, conect


# ======================================================
# BOND INFERENCE
# ======================================================

def covalent_radius(element: str) -> float:
    return COVALENT_RADII.get(element, UNKNOWN_RADIUS)


def infer_bonds(positions: np.ndarray, elements: list[str], tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Pairs (u, v), u < v, with dist(u, v) <= r(u) + r(v) + tolerance."""
    if len(positions) < 2:
        return np.empty((0, 2), dtype=np.int64)

    radii = np.array([covalent_radius(e) for e in elements])
    cutoff = 2 * radii.max() + tolerance

    tree = cKDTree(positions)
    pairs = tree.query_pairs(cutoff, output_type="ndarray")
    if len(pairs) == 0:
        return np.empty((0, 2), dtype=np.int64)

    dist = np.linalg.norm(positions[pairs[:, 0]] - positions[pairs[:, 1]], axis=1)
    bonded = dist <= radii[pairs[:, 0]] + radii[pairs[:, 1]] + tolerance
    return np.sort(pairs[bonded].astype(np.int64), axis=1)


# ======================================================
# LOAD
# ======================================================

def load_structure(
    path: str | Path,
    bond_mode: BondMode | str = BondMode.records_then_infer,
    tolerance: float = DEFAULT_TOLERANCE,
    strip_h: bool = False,
) -> MolecularGraph:
    bond_mode = BondMode(bond_mode)
    records, conect = read_structure_records(path)

    if strip_h:
        before = len(records)
        records = [r for r in records if r["element"] not in HYDROGENS]
        logger.info("Hydrogens stripped | removed=%s", before - len(records))

    if not records:
        raise InputError(f"No atom records parsed from '{path}'")

    if bond_mode == BondMode.records_only and not conect:
        raise InputError(f"records-only bond mode but '{path}' has no CONECT records")

    atoms = tuple(
        AtomRecord(
            id=i,
            element=r["element"],
            atom_name=r["atom_name"],
            residue_name=r["residue_name"],
            residue_seq=r["residue_seq"],
            chain=r["chain"],
            position=r["position"],
            serial=r["serial"],
        )
        for i, r in enumerate(records)
    )

    edges: list[np.ndarray] = []

    if bond_mode in (BondMode.records_only, BondMode.records_then_infer):
        by_serial = {a.serial: a.id for a in atoms}
        explicit = [
            (by_serial[s], by_serial[t])
            for s, t in conect
            if s in by_serial and t in by_serial
        ]
        dropped = len(conect) - len(explicit)
        if dropped:
            logger.info("Connectivity records skipped | unknown_serials=%s", dropped)
        edges.append(np.asarray(explicit, dtype=np.int64).reshape(-1, 2))

    if bond_mode in (BondMode.infer, BondMode.records_then_infer):
        positions = np.array([a.position for a in atoms], dtype=float)
        edges.append(infer_bonds(positions, [a.element for a in atoms], tolerance))

    graph = MolecularGraph.from_edges(len(atoms), np.concatenate(edges), atoms)
    logger.info(
        "Structure loaded | path=%s nodes=%s edges=%s mode=%s",
        path, graph.node_count, graph.edge_count, bond_mode.value,
    )
    return graph
