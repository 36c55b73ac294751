"""
Ratio sweeps: many seeded trials per stimulation ratio, aggregated per rho.

Each (rho, trial) cell gets its own seed derived from the base seed, so the
raw rows do not depend on the order in which trials run or on the number
of workers.
"""

import logging
import math

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from actin_automaton.automaton import EXCITED, Configuration, make_rng, stimulate
from actin_automaton.errors import UsageError
from actin_automaton.models import ExcitationRule, Scenario, ScenarioKind, Termination
from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.trajectory import run_to_attractor
from actin_automaton.utils.pool import map_ordered
from actin_automaton.utils.seeds import trial_seed

logger = logging.getLogger(__name__)

RAW_COLUMNS = ["rho", "trial", "seed", "scenario", "rule", "p", "c", "e", "termination"]
SUMMARY_COLUMNS = ["rho", "n", "n_exhausted", "p", "c", "e", "sigma_p", "sigma_c", "sigma_e"]

TABLE1_RHOS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


# =========================
# CONFIG
# =========================

class SweepConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: ExcitationRule = Field(default_factory=ExcitationRule.a0)
    scenario: ScenarioKind = ScenarioKind.plus
    rho_list: list[float] = Field(default_factory=lambda: list(TABLE1_RHOS))
    trials_per_rho: int = Field(10, ge=1)
    base_seed: int = Field(0, ge=0, lt=2**64)
    max_steps: int | None = Field(None, ge=1)
    history_cap_mb: float | None = Field(None, gt=0)

    @field_validator("rho_list")
    @classmethod
    def _check_rhos(cls, v):
        for rho in v:
            if not 0.0 < rho <= 1.0:
                raise ValueError(f"rho must be in (0, 1], got {rho}")
        return v

    @model_validator(mode="after")
    def _check_scenario(self):
        if self.scenario != ScenarioKind.single and not self.rho_list:
            raise ValueError("rho_list must not be empty")
        return self

    @property
    def cells(self) -> list[tuple[int, float | None]]:
        """(rho index, rho); single-node sweeps have one cell without a rho."""
        if self.scenario == ScenarioKind.single:
            return [(0, None)]
        return list(enumerate(self.rho_list))


def parse_rho_list(text: str) -> list[float]:
    """``start:stop:step`` (inclusive stop) or a comma separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 10) for i in range(max(count, 0))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise UsageError(f"Invalid rho list: '{text}'. Use start:stop:step or a,b,c") from e


# ======================================================
# TRIALS
# ======================================================

_WORKER_GRAPH: MolecularGraph | None = None


def _init_worker(g: MolecularGraph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def trial_scenario(kind: ScenarioKind, rho: float | None, seed: int, node_count: int) -> Scenario:
    if kind == ScenarioKind.single:
        node = int(make_rng(seed, 0).integers(node_count))
        return Scenario(kind=kind, node=node)
    return Scenario(kind=kind, rho=rho)


def run_trial(g: MolecularGraph, rule: ExcitationRule, scenario: Scenario, seed: int,
              max_steps: int | None = None, history_cap_mb: float | None = None):
    cfg = Configuration.resting(g.node_count)
    if scenario.kind == ScenarioKind.single:
        cfg = cfg.with_states([scenario.node], EXCITED)
    else:
        cfg = stimulate(cfg, scenario, make_rng(seed, 0))
    return run_to_attractor(g, rule, cfg, max_steps, history_cap_mb=history_cap_mb)


def _run_cell(task) -> dict:
    rho_index, rho, trial, seed, cfg = task
    g = _WORKER_GRAPH
    scenario = trial_scenario(cfg.scenario, rho, seed, g.node_count)
    result = run_trial(g, cfg.rule, scenario, seed, cfg.max_steps, cfg.history_cap_mb)
    return {
        "rho": rho,
        "trial": trial,
        "seed": seed,
        "scenario": scenario.label,
        "rule": cfg.rule.label,
        "p": result.transient_p,
        "c": result.cycle_c,
        "e": result.excitation_e,
        "termination": result.termination.value,
    }


# ======================================================
# AGGREGATION
# ======================================================

class SummaryRow(BaseModel):
    rho: float | None
    n: int
    n_exhausted: int
    p: float | None
    c: float | None
    e: float | None
    sigma_p: float | None
    sigma_c: float | None
    sigma_e: float | None


class SweepSummary(BaseModel):
    rule: str
    scenario: str
    rows: list[SummaryRow]
    grand_p: float | None
    grand_c: float | None
    grand_e: float | None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rows], columns=SUMMARY_COLUMNS)


def _nan_to_none(x) -> float | None:
    return None if x is None or pd.isna(x) else float(x)


def _sample_std(values: pd.Series) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values.to_numpy(dtype=float), ddof=1))


def summarize(raw: pd.DataFrame, rule: str | None = None, scenario: str | None = None) -> SweepSummary:
    """
    Per-rho means and sample standard deviations of p, c and e.
    Budget-exhausted trials are counted in ``n_exhausted`` and left out of
    every mean.
    """
    rows = []
    for rho, group in raw.groupby("rho", dropna=False, sort=True):
        finished = group[group["termination"] != Termination.budget_exhausted.value]
        stats = {}
        for col in ("p", "c", "e"):
            values = finished[col].astype(float)
            stats[col] = float(values.mean()) if len(values) else None
            stats[f"sigma_{col}"] = _sample_std(values) if len(values) else None
        rows.append(SummaryRow(
            rho=_nan_to_none(rho),
            n=len(group),
            n_exhausted=len(group) - len(finished),
            **stats,
        ))

    def grand(col: str) -> float | None:
        values = [getattr(r, col) for r in rows if getattr(r, col) is not None]
        return float(np.mean(values)) if values else None

    if rule is None and len(raw):
        rule = str(raw["rule"].iloc[0])
    if scenario is None and len(raw):
        scenario = str(raw["scenario"].iloc[0]).split(":")[0]

    return SweepSummary(
        rule=rule or "",
        scenario=scenario or "",
        rows=rows,
        grand_p=grand("p"),
        grand_c=grand("c"),
        grand_e=grand("e"),
    )


def raw_frame(rows: list[dict]) -> pd.DataFrame:
    df = pd.DataFrame(rows, columns=RAW_COLUMNS)
    for col in ("p", "c", "e"):
        df[col] = df[col].astype("Int64")
    df["seed"] = df["seed"].astype("uint64")
    return df.sort_values(["rho", "trial"], na_position="first", kind="mergesort").reset_index(drop=True)


# ======================================================
# SWEEP_RATIO
# ======================================================

def sweep_ratio(g: MolecularGraph, cfg: SweepConfig, workers: int = 1) -> tuple[SweepSummary, pd.DataFrame]:
    """Run every (rho, trial) cell of ``cfg``; returns the summary and the raw rows."""
    tasks = [
        (rho_index, rho, trial, trial_seed(cfg.base_seed, rho_index, trial), cfg)
        for rho_index, rho in cfg.cells
        for trial in range(cfg.trials_per_rho)
    ]
    logger.info(
        "Sweep started | rule=%s scenario=%s cells=%s workers=%s",
        cfg.rule.label, cfg.scenario.value, len(tasks), workers,
    )

    rows = map_ordered(
        _run_cell, tasks, workers,
        processes=workers > 1, initializer=_init_worker, initargs=(g,),
    )
    raw = raw_frame(rows)

    exhausted = int((raw["termination"] == Termination.budget_exhausted.value).sum())
    if exhausted:
        logger.warning("Trials hit max_steps | count=%s", exhausted)

    summary = summarize(raw, rule=cfg.rule.label, scenario=cfg.scenario.value)
    return summary, raw
