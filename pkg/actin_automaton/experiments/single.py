"""
Single-node sweeps: excite one node of the resting graph and record how
long the excitation takes to settle. Deterministic unless sampled.
"""

import logging

import numpy as np
import pandas as pd
from pydantic import BaseModel

from actin_automaton.automaton import EXCITED, Configuration
from actin_automaton.models import ExcitationRule, Termination
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.molgraph.stats import eccentricity_nodes
from actin_automaton.trajectory import run_to_attractor
from actin_automaton.utils.pool import map_ordered
from actin_automaton.utils.seeds import sampling_rng

logger = logging.getLogger(__name__)

DEFAULT_BAND = (2, 15)
NODE_COLUMNS = ["node", "p", "c", "e", "termination"]


class SingleSweepSummary(BaseModel):
    rule: str
    nodes_run: int
    sampled: bool
    n_exhausted: int
    mean: float | None
    median: float | None
    min: int | None
    max: int | None
    histogram: dict[int, int]
    band: tuple[int, int]
    band_count: int
    longest_node: int | None
    longest_eccentricity: int | None


_WORKER_GRAPH: MolecularGraph | None = None


def _init_worker(g: MolecularGraph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def _run_node(task) -> dict:
    node, rule, max_steps, history_cap_mb = task
    g = _WORKER_GRAPH
    cfg = Configuration.resting(g.node_count).with_states([node], EXCITED)
    r = run_to_attractor(g, rule, cfg, max_steps, history_cap_mb=history_cap_mb)
    return {
        "node": node,
        "p": r.transient_p,
        "c": r.cycle_c,
        "e": r.excitation_e,
        "termination": r.termination.value,
    }


def sample_nodes(node_count: int, sample: int, seed: int) -> list[int]:
    sample = min(sample, node_count)
    return sorted(sampling_rng(seed).choice(node_count, size=sample, replace=False).tolist())


def sweep_single_node(
    g: MolecularGraph,
    rule: ExcitationRule,
    max_steps: int | None = None,
    *,
    band: tuple[int, int] = DEFAULT_BAND,
    sample: int | None = None,
    seed: int = 0,
    workers: int = 1,
    history_cap_mb: float | None = None,
) -> tuple[SingleSweepSummary, pd.DataFrame]:
    """
    Run every node (or ``sample`` seeded nodes) as a single-node stimulus.
    Returns the distribution summary of p and the per-node rows.
    """
    if g.node_count == 0:
        raise ValueError("single-node sweep needs a non-empty graph")

    nodes = list(range(g.node_count)) if sample is None else sample_nodes(g.node_count, sample, seed)
    tasks = [(node, rule, max_steps, history_cap_mb) for node in nodes]
    logger.info("Single-node sweep started | rule=%s nodes=%s workers=%s", rule.label, len(nodes), workers)

    rows = map_ordered(
        _run_node, tasks, workers,
        processes=workers > 1, initializer=_init_worker, initargs=(g,), chunksize=16,
    )
    df = pd.DataFrame(rows, columns=NODE_COLUMNS)
    for col in ("p", "c", "e"):
        df[col] = df[col].astype("Int64")

    done = df[df["termination"] != Termination.budget_exhausted.value]
    p = done["p"].to_numpy(dtype=np.int64)

    longest_node = longest_ecc = None
    if len(p):
        longest_node = int(done["node"].iloc[int(np.argmax(p))])
        longest_ecc = eccentricity_nodes(g, longest_node)

    values, counts = np.unique(p, return_counts=True)
    lo, hi = band
    summary = SingleSweepSummary(
        rule=rule.label,
        nodes_run=len(nodes),
        sampled=sample is not None,
        n_exhausted=len(df) - len(done),
        mean=float(p.mean()) if len(p) else None,
        median=float(np.median(p)) if len(p) else None,
        min=int(p.min()) if len(p) else None,
        max=int(p.max()) if len(p) else None,
        histogram={int(v): int(c) for v, c in zip(values, counts)},
        band=(lo, hi),
        band_count=int(((p >= lo) & (p <= hi)).sum()),
        longest_node=longest_node,
        longest_eccentricity=longest_ecc,
    )
    return summary, df
