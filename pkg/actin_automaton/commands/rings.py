import pandas as pd

from actin_automaton.commands.common import add_output_flag, build, check_output, finish, info
from actin_automaton.config import Settings
from actin_automaton.errors import UsageError
from actin_automaton.experiments.compare import compare_to_reference, render_comparisons
from actin_automaton.models import CountMode
from actin_automaton.molgraph.edgelist import load_graph
from actin_automaton.outputs.service import SnapshotWriter, check_destination, emit_frame
from actin_automaton.rings.capacity import CapacityParameters, memory_capacity
from actin_automaton.rings.memory import check_noise_tolerance, generator_demo
from actin_automaton.rings.perception import census, find_rings

HELP = """\
Aromatic rings and their use as one-bit memories.
  --list              id,kind,residue_name,residue_seq,chain,size,nodes,attachments
  --census            residue,count rows and a total (default action)
  --tolerance-check N perturbation census on an isolated N-ring (4..12)
  --in-situ ID        the same checks on ring ID inside the full graph
  --demo ID --steps K write a bit on ring ID and evolve the graph; NDJSON
                      snapshots go to --demo-out (default stdout), the
                      escape step to stderr
  --capacity          storage arithmetic from the census
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("rings", help="ring perception and ring memories", description=HELP)
    p.add_argument("--graph", default=None, help="graph file (needs atom annotations to classify)")
    p.add_argument("--strip-h", action="store_true")
    p.add_argument("--unclassified", action="store_true", help="every chordless 5/6-cycle, ignore annotations")
    p.add_argument("--list", action="store_true")
    p.add_argument("--census", action="store_true")
    p.add_argument("--count-mode", type=CountMode, choices=list(CountMode), default=CountMode.rings,
                   metavar="{rings,residues,paper}", help="paper is an alias of residues: TRP counts once")
    p.add_argument("--tolerance-check", type=int, default=None, metavar="N")
    p.add_argument("--in-situ", type=int, default=None, metavar="ID")
    p.add_argument("--demo", type=int, default=None, metavar="ID")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--phase", type=int, default=0)
    p.add_argument("--demo-out", default=None, help="NDJSON snapshots of the demo run")
    p.add_argument("--capacity", action="store_true")
    p.add_argument("--rings-per-unit", type=int, default=None, help="census total to use for --capacity")
    p.add_argument("--persistence-length-um", type=float, default=17.0)
    p.add_argument("--unit-size-nm", type=float, default=4.0)
    p.add_argument("--strands", type=int, default=2)
    p.add_argument("--units-per-filament", type=int, default=None)
    p.add_argument("--filament-area-nm2", type=float, default=3200.0)
    p.add_argument("--compare", action="store_true", help="compare the census with the reference (stderr)")
    add_output_flag(p, "census CSV")
    p.set_defaults(handler=handle)


# ── sections ─────────────────────────────────────────────────────

LIST_COLUMNS = ["id", "kind", "residue_name", "residue_seq", "chain", "size", "nodes", "attachments"]
TOLERANCE_COLUMNS = ["kind", "phase", "nodes", "termination", "p", "c"]


def _ids(values) -> str:
    return " ".join(map(str, values))


def _list_frame(rings) -> pd.DataFrame:
    rows = [
        [i, r.kind or "", r.residue_name, r.residue_seq, r.chain, r.size, _ids(r.nodes), _ids(r.attachments)]
        for i, r in enumerate(rings)
    ]
    return pd.DataFrame(rows, columns=LIST_COLUMNS, dtype=object)


def _tolerance_header(report) -> str:
    return (
        f"# ring_size={report.ring_size} in_situ={str(report.in_situ).lower()} "
        f"single_cases={report.single_cases} pair_cases={report.pair_cases} "
        f"wave_persistent={str(report.wave_persistent).lower()}"
    )


def _tolerance_frame(report) -> pd.DataFrame:
    rows = [
        [kind, c.phase, _ids(c.nodes), c.termination.value, c.transient_p, c.cycle_c]
        for kind, cases in (("counterexample", report.counterexamples),
                            ("erase_failure", report.erase_failures),
                            ("regeneration_failure", report.regeneration_failures))
        for c in cases
    ]
    return pd.DataFrame(rows, columns=TOLERANCE_COLUMNS, dtype=object)


def _print_tolerance(report) -> None:
    print(_tolerance_header(report))
    emit_frame(_tolerance_frame(report))


def _pick(rings, ring_id: int, flag: str):
    if not 0 <= ring_id < len(rings):
        raise UsageError(f"{flag} {ring_id} out of range, graph has {len(rings)} rings")
    return rings[ring_id]


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    if args.demo_out:
        check_destination(args.demo_out, {"ndjson"})

    needs_graph = (
        args.list or args.census or args.in_situ is not None or args.demo is not None
        or (args.capacity and args.rings_per_unit is None)
    )
    if not any([args.list, args.census, args.tolerance_check is not None, args.in_situ is not None,
                args.demo is not None, args.capacity]):
        args.census = needs_graph = True
    if needs_graph and args.graph is None:
        raise UsageError("--graph is required for this action")

    rings = ring_census = g = None
    if needs_graph:
        g = load_graph(args.graph, bond_mode=settings.bond_mode, tolerance=settings.bond_tolerance,
                       strip_h=args.strip_h)
        rings = find_rings(g, classify=not args.unclassified)
        ring_census = census(rings, args.count_mode)

    if args.list:
        emit_frame(_list_frame(rings))

    if args.census:
        emit_frame(pd.DataFrame(ring_census.to_rows(), columns=["residue", "count"]), args.output)
        if args.compare:
            info(render_comparisons(compare_to_reference(ring_census, gating=False)))

    if args.tolerance_check is not None:
        report = check_noise_tolerance(args.tolerance_check, workers=settings.threads)
        _print_tolerance(report)

    if args.in_situ is not None:
        ring = _pick(rings, args.in_situ, "--in-situ")
        report = check_noise_tolerance(g=g, ring=ring, workers=settings.threads)
        _print_tolerance(report)

    if args.demo is not None:
        ring = _pick(rings, args.demo, "--demo")
        if args.steps < 1:
            raise UsageError("--steps must be >= 1")
        with SnapshotWriter(args.demo_out) as sink:
            demo = generator_demo(g, ring, args.steps, phase=args.phase, on_step=sink)
        escape = "none" if demo.escape_step is None else f"{demo.escape_step} node={demo.escape_node}"
        info(f"ring={args.demo} attachments={len(demo.attachments)} escape_step={escape}\n")

    if args.capacity:
        total = args.rings_per_unit if args.rings_per_unit is not None else ring_census.total
        params = build(
            CapacityParameters,
            persistence_length_um=args.persistence_length_um,
            unit_size_nm=args.unit_size_nm,
            strands=args.strands,
            units_per_filament=args.units_per_filament,
            filament_area_nm2=args.filament_area_nm2,
        )
        report = memory_capacity(total, params)
        rows = [(k, f"{v:g}", report.units[k]) for k, v in report.model_dump(exclude={"units"}).items()]
        emit_frame(pd.DataFrame(rows, columns=["key", "value", "unit"]))

    if args.census:
        finish(args, "rings", {"count_mode": args.count_mode.value, "unclassified": args.unclassified},
               extra_outputs=[args.demo_out])
    return 0
