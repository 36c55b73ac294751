from contextlib import nullcontext

import pandas as pd

from actin_automaton.automaton import EXCITED, Configuration, make_rng, stimulate
from actin_automaton.commands.common import (
    add_graph_flag,
    add_max_steps_flag,
    add_output_flag,
    add_rule_flag,
    build,
    check_output,
    finish,
    info,
    load_graph_from_args,
    resolve_max_steps,
)
from actin_automaton.config import Settings
from actin_automaton.errors import UsageError
from actin_automaton.experiments.profile import excitation_profile
from actin_automaton.models import Restimulation, Scenario, ScenarioKind, StimulationSpec
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.outputs.service import SnapshotWriter, check_destination, emit_frame, write_frame
from actin_automaton.rings.memory import write_bit
from actin_automaton.rings.perception import find_rings
from actin_automaton.trajectory import run_to_attractor, run_with_restimulation

RESULT_COLUMNS = ["seed", "scenario", "rho", "rule", "p", "c", "e", "termination"]

HELP = """\
Run one trajectory to its attractor and print one CSV row:
seed,scenario,rho,rule,p,c,e,termination (p, c, e empty when the step
budget runs out). --init takes single:<id>, plus:<rho>, plusminus:<rho>
or ring:<ring-id>:<phase>. --restim <step|cycle>:<stimulation> may be
repeated; p is then counted from the last stimulation.
"""


def register(subparsers) -> None:
    p = subparsers.add_parser("run", help="one trajectory", description=HELP)
    add_graph_flag(p)
    add_rule_flag(p)
    p.add_argument("--init", required=True, help="initial stimulation")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for random stimulations")
    p.add_argument("--restim", action="append", default=[], type=Restimulation.parse,
                   help="re-stimulation trigger, e.g. 5:plus:0.05 or cycle:plusminus:0.1")
    add_max_steps_flag(p)
    p.add_argument("--dump-states", default=None, help="NDJSON stream of every configuration")
    p.add_argument("--series-out", default=None, help="CSV of step,excited,stimulated")
    p.add_argument("--profile", action="store_true",
                   help="report excitation drop and recovery around each re-stimulation (stderr)")
    add_output_flag(p)
    p.set_defaults(handler=handle)


# ── initial condition ────────────────────────────────────────────

def initial_configuration(g: MolecularGraph, text: str, seed: int) -> tuple[Configuration, Scenario | None, str]:
    """The start configuration, the scenario behind it (None for rings) and its label."""
    token = text.strip().lower()
    if token.startswith("ring:"):
        parts = token.split(":")
        try:
            ring_id, phase = int(parts[1]), int(parts[2])
        except (IndexError, ValueError) as e:
            raise UsageError(f"Invalid stimulation: '{text}'. Use ring:<ring-id>:<phase>") from e
        rings = find_rings(g)
        if not 0 <= ring_id < len(rings):
            raise UsageError(f"Ring id {ring_id} out of range, graph has {len(rings)} rings")
        cfg = write_bit(Configuration.resting(g.node_count), rings[ring_id], phase)
        return cfg, None, f"ring:{ring_id}:{phase}"

    scenario = Scenario.parse(text)
    cfg = Configuration.resting(g.node_count)
    if scenario.kind == ScenarioKind.single:
        if scenario.node >= g.node_count:
            raise UsageError(f"Node {scenario.node} out of range for {g.node_count} nodes")
        cfg = cfg.with_states([scenario.node], EXCITED)
    else:
        cfg = stimulate(cfg, scenario, make_rng(seed, 0))
    return cfg, scenario, scenario.label


def _cell(x) -> str:
    return "" if x is None else str(x)


def handle(args, settings: Settings) -> int:
    check_output(args, {"csv"})
    if args.dump_states:
        check_destination(args.dump_states, {"ndjson"})
    if args.series_out:
        check_destination(args.series_out, {"csv"})

    if not 0 <= args.seed < 2**64:
        raise UsageError(f"--seed must be in [0, 2^64), got {args.seed}")

    g = load_graph_from_args(args, settings)
    max_steps = resolve_max_steps(args, settings, g)
    cfg0, scenario, label = initial_configuration(g, args.init, args.seed)

    options = dict(history_cap_mb=settings.history_cap_mb, series_limit=settings.series_limit)
    events = []
    with (SnapshotWriter(args.dump_states) if args.dump_states else nullcontext()) as sink:
        if args.restim:
            spec = build(
                StimulationSpec,
                scenario=scenario,
                seed=args.seed,
                restimulation=args.restim,
            )
            outcome = run_with_restimulation(g, args.rule, cfg0, spec, max_steps, on_step=sink, **options)
            result, events = outcome.result, outcome.stimulations
        else:
            result = run_to_attractor(g, args.rule, cfg0, max_steps, on_step=sink, **options)

    rho = None if scenario is None or scenario.rho is None else f"{scenario.rho:g}"
    row = [
        str(args.seed), label, rho, args.rule.label,
        result.transient_p, result.cycle_c, result.excitation_e, result.termination.value,
    ]
    emit_frame(pd.DataFrame([row], columns=RESULT_COLUMNS, dtype=object), args.output)

    if args.series_out:
        marked = {e.step for e in events}
        series = pd.DataFrame({
            "step": range(len(result.series)),
            "excited": result.series,
            "stimulated": [int(t in marked) for t in range(len(result.series))],
        })
        write_frame(args.series_out, series)

    if args.profile and events:
        for w in excitation_profile(result.series, events):
            info(
                f"stimulation step={w.step} level_before={w.level_before:.1f} "
                f"drop={w.drop:.1f} recovery_steps={_cell(w.recovery_steps)}\n"
            )

    finish(
        args, "run",
        {
            "rule": args.rule.label, "init": label, "seed": args.seed, "max_steps": max_steps,
            "restim": [f"{r.trigger}:{r.scenario.label}" for r in args.restim],
        },
        extra_outputs=[args.dump_states, args.series_out],
    )
    return 0
