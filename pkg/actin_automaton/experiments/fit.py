"""
Power law p = a * rho^b fitted by least squares on (ln rho, ln p).
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from actin_automaton.errors import FitInputError, InputError
from actin_automaton.experiments.sweep import summarize

logger = logging.getLogger(__name__)

MIN_POINTS = 3


class FitResult(BaseModel):
    a: float
    b: float
    residual: float
    n_points: int


def fit_power_law(points) -> FitResult:
    pts = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if len(pts) < MIN_POINTS:
        raise FitInputError(f"Power-law fit needs at least {MIN_POINTS} points, got {len(pts)}")
    if np.any(~np.isfinite(pts)) or np.any(pts <= 0):
        raise FitInputError("Power-law fit needs positive, finite (rho, p) points")

    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return FitResult(a=float(np.exp(intercept)), b=float(slope), residual=rms, n_points=len(pts))


def points_from_csv(path: str | Path) -> list[tuple[float, float]]:
    """
    (rho, mean p) pairs from either a raw sweep CSV or a summary CSV.
    Rows without a positive rho and a positive p are skipped.
    """
    try:
        df = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError(f"Cannot read sweep table '{path}': {e}") from e

    if not {"rho", "p"} <= set(df.columns):
        raise InputError(f"Sweep table '{path}' needs 'rho' and 'p' columns")

    if "termination" in df.columns:
        df = summarize(df).to_frame()

    df = df.dropna(subset=["rho", "p"])
    usable = df[(df["rho"] > 0) & (df["p"] > 0)]
    if len(usable) < len(df):
        logger.warning("Skipped non-positive fit points | count=%s", len(df) - len(usable))
    return list(zip(usable["rho"].astype(float), usable["p"].astype(float)))
