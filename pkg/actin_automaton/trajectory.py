"""
Exact attractor detection.

A run keeps a fingerprint -> steps map over packed configurations and
confirms every fingerprint hit by comparing the full packed state, so
fingerprint collisions never produce a wrong answer. When the history
would exceed its memory cap the run restarts from the origin with
Brent's power-of-two cycle finder, which needs O(1) stored states.
"""

import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from actin_automaton.automaton import (
    EXCITED,
    Configuration,
    Stepper,
    excited_count,
    make_rng,
    pack,
    stimulate,
    stimulated_count,
    unpack,
)
from actin_automaton.errors import ConfigurationLengthError, CycleCertificationError
from actin_automaton.models import (
    ExcitationRule,
    RestimulationResult,
    StimulationEvent,
    StimulationSpec,
    Termination,
    TrajectoryResult,
)
from actin_automaton.molgraph.graph import MolecularGraph

logger = logging.getLogger(__name__)

DEFAULT_STEPS_PER_NODE = 100
DEFAULT_HISTORY_CAP_MB = 256.0
# dict + list bookkeeping per stored configuration
_ENTRY_OVERHEAD = 120

Fingerprint = Callable[[bytes], bytes]
SnapshotSink = Callable[..., None]


def make_fingerprint(key: bytes = b"") -> Fingerprint:
    """128-bit keyed BLAKE2b over the packed state."""
    def fingerprint(packed: bytes) -> bytes:
        return hashlib.blake2b(packed, digest_size=16, key=key).digest()
    return fingerprint


default_fingerprint = make_fingerprint()


def default_max_steps(node_count: int) -> int:
    return max(1, DEFAULT_STEPS_PER_NODE * node_count)


def history_limit_for(node_count: int, cap_mb: float) -> int:
    entry = 2 * ((node_count + 7) // 8) + _ENTRY_OVERHEAD
    return max(2, int(cap_mb * 1024 * 1024) // entry)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


# ======================================================
# DETECTION CORE
# ======================================================

@dataclass
class _Detection:
    termination: Termination
    p: int | None
    c: int | None
    detect_step: int
    series: list[int]
    final_states: np.ndarray
    cycle_states: np.ndarray | None = field(default=None, repr=False)


def _count_excited(states: np.ndarray) -> int:
    return int(np.count_nonzero(states == EXCITED))


def _certify(stepper: Stepper, entry: np.ndarray, c: int) -> None:
    cur = entry.copy()
    nxt = np.empty_like(cur)
    for _ in range(c):
        stepper.advance(cur, nxt)
        cur, nxt = nxt, cur
    if not np.array_equal(cur, entry):
        raise CycleCertificationError(f"Replaying {c} steps did not reproduce the cycle entry")


def _brent(stepper: Stepper, origin: np.ndarray, max_steps: int) -> tuple[int, int] | None:
    """(mu, lam) by Brent's algorithm, or None when the budget runs out first."""
    def f(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        stepper.advance(x, out)
        return out

    hare_limit = 8 * max_steps + 8
    power = lam = 1
    tortoise = origin.copy()
    hare = f(origin)
    hare_steps = 1
    while not np.array_equal(tortoise, hare):
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        hare_steps += 1
        if hare_steps > hare_limit:
            return None

    tortoise = origin.copy()
    hare = origin.copy()
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while not np.array_equal(tortoise, hare):
        tortoise = f(tortoise)
        hare = f(hare)
        mu += 1
    return mu, lam


def _replay(stepper: Stepper, origin: np.ndarray, steps: int, sink: SnapshotSink | None, emitted_upto: int):
    """Counts for steps 0..steps, the final state and the state at every step past ``emitted_upto``."""
    cur = origin.copy()
    nxt = np.empty_like(cur)
    series = [_count_excited(cur)]
    for t in range(1, steps + 1):
        stepper.advance(cur, nxt)
        cur, nxt = nxt, cur
        series.append(_count_excited(cur))
        if sink is not None and t > emitted_upto:
            sink(t, cur)
    return series, cur


def _detect(
    stepper: Stepper,
    origin: np.ndarray,
    max_steps: int,
    history_limit: int,
    fingerprint: Fingerprint,
    sink: SnapshotSink | None = None,
    emit_origin: bool = True,
) -> _Detection:
    cur = origin.copy()
    nxt = np.empty_like(cur)
    fp_map: dict[bytes, list[int]] = {}
    history: list[bytes] = []
    series: list[int] = []
    t = 0

    while True:
        series.append(_count_excited(cur))
        if sink is not None and (t > 0 or emit_origin):
            sink(t, cur)

        if not cur.any():
            return _Detection(Termination.absorbing, t, 1, t, series, cur.copy(), cur.copy())

        packed = pack(cur)
        key = fingerprint(packed)
        for s in fp_map.get(key, ()):
            if history[s] == packed:
                entry = unpack(history[s], len(cur))
                _certify(stepper, entry, t - s)
                return _Detection(Termination.limit_cycle, s, t - s, t, series, cur.copy(), entry)

        if t >= max_steps:
            return _Detection(Termination.budget_exhausted, None, None, t, series, cur.copy())

        if len(history) >= history_limit:
            logger.info(
                "Fingerprint history full, switching to Brent | step=%s entries=%s", t, len(history)
            )
            return _detect_brent(stepper, origin, max_steps, sink, emitted_upto=t)

        fp_map.setdefault(key, []).append(t)
        history.append(packed)

        stepper.advance(cur, nxt)
        cur, nxt = nxt, cur
        t += 1


def _detect_brent(stepper: Stepper, origin: np.ndarray, max_steps: int, sink, emitted_upto: int) -> _Detection:
    found = _brent(stepper, origin, max_steps)
    if found is not None:
        mu, lam = found
        absorbing = lam == 1
        detect_step = mu if absorbing else mu + lam
    if found is None or detect_step > max_steps:
        series, final = _replay(stepper, origin, max_steps, sink, emitted_upto)
        return _Detection(Termination.budget_exhausted, None, None, max_steps, series, final)

    series, final = _replay(stepper, origin, detect_step, sink, emitted_upto)
    if absorbing:
        return _Detection(Termination.absorbing, mu, 1, detect_step, series, final, final.copy())
    # the state at mu + lam equals the state at mu
    _certify(stepper, final, lam)
    return _Detection(Termination.limit_cycle, mu, lam, detect_step, series, final, final.copy())


def _to_result(det: _Detection, series: list[int], steps_run: int, series_limit: int | None) -> TrajectoryResult:
    e = None
    if det.termination == Termination.absorbing:
        e = 0
    elif det.termination == Termination.limit_cycle:
        cycle = det.series[det.p:det.p + det.c]
        e = round_half_up(sum(cycle) / len(cycle))

    if series_limit is not None:
        series = series[:series_limit]

    return TrajectoryResult(
        transient_p=det.p,
        cycle_c=det.c,
        excitation_e=e,
        series=series,
        termination=det.termination,
        steps_run=steps_run,
    )


def _resolve(g: MolecularGraph, cfg0: Configuration, max_steps, history_limit, history_cap_mb):
    if cfg0.node_count != g.node_count:
        raise ConfigurationLengthError(
            f"Configuration has {cfg0.node_count} nodes, graph has {g.node_count}"
        )
    if max_steps is None:
        max_steps = default_max_steps(g.node_count)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if history_limit is None:
        history_limit = history_limit_for(g.node_count, history_cap_mb or DEFAULT_HISTORY_CAP_MB)
    return max_steps, history_limit


# ======================================================
# PUBLIC OPERATIONS
# ======================================================

def run_to_attractor(
    g: MolecularGraph,
    rule: ExcitationRule,
    cfg0: Configuration,
    max_steps: int | None = None,
    *,
    history_limit: int | None = None,
    history_cap_mb: float | None = None,
    fingerprint: Fingerprint | None = None,
    on_step: SnapshotSink | None = None,
    series_limit: int | None = None,
) -> TrajectoryResult:
    """
    Evolve ``cfg0`` until the absorbing state, a certified limit cycle, or
    ``max_steps``. ``transient_p`` is the index of the first configuration
    that belongs to the attractor; ``cycle_c`` its period.
    """
    max_steps, history_limit = _resolve(g, cfg0, max_steps, history_limit, history_cap_mb)
    stepper = Stepper(g, rule)
    det = _detect(stepper, cfg0.states, max_steps, history_limit, fingerprint or default_fingerprint, on_step)
    return _to_result(det, det.series, det.detect_step, series_limit)


def run_with_restimulation(
    g: MolecularGraph,
    rule: ExcitationRule,
    cfg0: Configuration,
    spec: StimulationSpec,
    max_steps: int | None = None,
    *,
    history_limit: int | None = None,
    history_cap_mb: float | None = None,
    fingerprint: Fingerprint | None = None,
    on_step: SnapshotSink | None = None,
    series_limit: int | None = None,
) -> RestimulationResult:
    """
    Like run_to_attractor, but applies ``spec.restimulation`` in order.

    Step triggers stimulate the configuration at that absolute step.
    ``cycle`` triggers fire at the detection step of the next certified
    attractor. Detection restarts from scratch after every stimulation and
    the returned ``transient_p`` is counted from the last one. Event k of
    the schedule draws from RNG stream k of ``spec.seed``.
    """
    max_steps, history_limit = _resolve(g, cfg0, max_steps, history_limit, history_cap_mb)
    fingerprint = fingerprint or default_fingerprint
    stepper = Stepper(g, rule)

    def emit(step: int, states: np.ndarray, note: str | None = None) -> None:
        if on_step is None:
            return
        if note:
            on_step(step, states, note)
        else:
            on_step(step, states)

    schedule = []
    for r in spec.restimulation:
        if r.trigger != "cycle" and r.trigger > max_steps:
            logger.warning("Re-stimulation ignored, beyond max_steps | trigger=%s max_steps=%s", r.trigger, max_steps)
            continue
        schedule.append(r)

    cur = cfg0.states.copy()
    nxt = np.empty_like(cur)
    t = 0
    series = [_count_excited(cur)]
    emit(0, cur)
    events: list[StimulationEvent] = []
    last_stimulation = 0

    def fire(event_index: int, scenario) -> None:
        nonlocal cur, last_stimulation
        before = _count_excited(cur)
        stimulated = stimulate(Configuration(cur, t), scenario, make_rng(spec.seed, event_index))
        cur = stimulated.states.copy()
        after = excited_count(stimulated)
        series[-1] = after
        emit(t, cur, "stimulated")
        events.append(StimulationEvent(
            step=t,
            scenario=scenario.label,
            stimulated=stimulated_count(scenario, len(cur)),
            excited_before=before,
            excited_after=after,
        ))
        last_stimulation = t
        logger.info("Re-stimulated | step=%s scenario=%s excited=%s->%s", t, scenario.label, before, after)

    def offset_sink(base: int):
        if on_step is None:
            return None
        return lambda local, states: on_step(base + local, states)

    for index, r in enumerate(schedule, start=1):
        if r.trigger == "cycle":
            det = _detect(stepper, cur, max_steps - t, history_limit, fingerprint, offset_sink(t), emit_origin=False)
            if det.termination == Termination.budget_exhausted:
                series.extend(det.series[1:])
                logger.warning("Budget exhausted before re-stimulation | pending=%s", len(schedule) - index + 1)
                return RestimulationResult(
                    result=_to_result(det, series, t + det.detect_step, series_limit),
                    stimulations=events,
                    last_stimulation_step=last_stimulation,
                )
            series.extend(det.series[1:])
            t += det.detect_step
            cur = det.final_states.copy()
            nxt = np.empty_like(cur)
            fire(index, r.scenario)
            continue

        if r.trigger < t:
            logger.warning("Re-stimulation ignored, step already passed | trigger=%s step=%s", r.trigger, t)
            continue
        while t < r.trigger:
            stepper.advance(cur, nxt)
            cur, nxt = nxt, cur
            t += 1
            series.append(_count_excited(cur))
            emit(t, cur)
        fire(index, r.scenario)

    det = _detect(stepper, cur, max_steps - t, history_limit, fingerprint, offset_sink(t), emit_origin=False)
    series.extend(det.series[1:])
    return RestimulationResult(
        result=_to_result(det, series, t + det.detect_step, series_limit),
        stimulations=events,
        last_stimulation_step=last_stimulation,
    )
