from actin_automaton.commands.common import add_output_flag, check_output, finish, info
from actin_automaton.config import Settings
from actin_automaton.models import BondMode
from actin_automaton.molgraph.graph import atoms_to_frame, sidecar_path, to_canonical_text
from actin_automaton.molgraph.structure import load_structure
from actin_automaton.outputs.service import emit, write_frame

HELP = """\
Read a PDB structure and write its molecular graph in canonical form:
a "nodes N edges M" header, then one "u v" line per edge (u < v, sorted).
With -o, atom annotations go to <output>.atoms.csv
(id,serial,element,atom_name,residue_name,residue_seq,chain,x,y,z).
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("ingest", help="structure file -> canonical graph", description=HELP)
    p.add_argument("structure", help=".pdb / .ent file")
    p.add_argument("--bond-mode", choices=[m.value for m in BondMode], default=None,
                   help="bond source (default: ACTIN_BOND_MODE)")
    p.add_argument("--tolerance", type=float, default=None,
                   help="bond tolerance in Angstrom added to the radius sum (default: ACTIN_BOND_TOLERANCE)")
    p.add_argument("--strip-h", action="store_true", help="drop H/D atoms before bonding")
    add_output_flag(p)
    p.set_defaults(handler=handle)


def handle(args, settings: Settings) -> int:
    check_output(args, {"txt"})
    bond_mode = args.bond_mode or settings.bond_mode
    tolerance = args.tolerance if args.tolerance is not None else settings.bond_tolerance

    g = load_structure(args.structure, bond_mode=bond_mode, tolerance=tolerance, strip_h=args.strip_h)
    emit(to_canonical_text(g), args.output)

    sidecar = None
    if args.output is not None and g.has_annotations:
        sidecar = sidecar_path(args.output)
        write_frame(sidecar, atoms_to_frame(g))

    info(f"nodes={g.node_count} edges={g.edge_count}\n")
    finish(
        args, "ingest",
        {"bond_mode": bond_mode, "tolerance": tolerance, "strip_h": args.strip_h},
        extra_outputs=[sidecar],
        graph_path=args.structure,
    )
    return 0
