"""Noise sweep over synthetic coseparable tensors."""

import logging
import time
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config import (
    COSNTF_DELTA,
    COSNTF_MAXITER,
    CSV_COLUMNS,
    FGM_LAMBDA,
    NOISE_LEVELS,
    RECOVERY_DELTA,
    RECOVERY_MAXITER,
    SWEEP_METHODS,
    SWEEP_TRIALS,
)
from ..models.experiment import ExperimentRecord, SynthSpec
from .recovery import reconstruct, recover_factors
from .scoring import rel_error
from .selection import select_indices
from .synthetic import gen_synthetic

logger = logging.getLogger(__name__)


def run_trial(
    tensor: np.ndarray,
    method: str,
    r1: int,
    r2: int,
    seed: int,
    noise: float,
    delta: float = COSNTF_DELTA,
    maxiter: int = COSNTF_MAXITER,
    lam: float = FGM_LAMBDA,
    timing: bool = False,
) -> ExperimentRecord:
    """Select a core with ``method``, recover the factors and score the reconstruction.

    Failures are logged and recorded with NaN errors instead of raised.
    """
    start = time.perf_counter()
    try:
        selection = select_indices(tensor, method, r1, r2, seed=seed, delta=delta, maxiter=maxiter, lam=lam)
        model = recover_factors(tensor, selection.I, selection.J, maxiter=RECOVERY_MAXITER, delta=RECOVERY_DELTA)
        error = rel_error(tensor, reconstruct(model))
    except Exception as e:
        logger.warning(f"Trial {method} seed={seed} noise={noise:g} failed: {str(e)}")
        return ExperimentRecord(
            method=method, r1=r1, r2=r2, seed=seed, noise=noise,
            rel_error=float("nan"), rel_approx=float("nan"), error=str(e),
        )
    wall_ms = (time.perf_counter() - start) * 1000.0 if timing else 0.0
    return ExperimentRecord(
        method=method,
        r1=r1,
        r2=r2,
        seed=seed,
        noise=noise,
        rel_error=error,
        rel_approx=1.0 - error,
        wall_ms=wall_ms,
        I=(selection.I + 1).tolist(),
        J=(selection.J + 1).tolist(),
    )


def summarize(records: Sequence[ExperimentRecord]) -> pd.DataFrame:
    """Trial rows followed, per noise level, by one mean row per method (seed ``mean``)."""
    trials = pd.DataFrame([r.model_dump(include=set(CSV_COLUMNS)) for r in records], columns=CSV_COLUMNS)
    if trials.empty:
        return trials
    trials["seed"] = trials["seed"].astype(str)
    method_order = list(dict.fromkeys(trials["method"]))
    blocks = []
    for noise, level in trials.groupby("noise", sort=True):
        means = level.groupby(["method", "r1", "r2"], sort=False)[["rel_error", "rel_approx", "wall_ms"]].agg(
            lambda column: column.mean(skipna=False)
        )
        means = means.reset_index()
        means["seed"] = "mean"
        means["noise"] = noise
        means["order"] = means["method"].map(method_order.index)
        means = means.sort_values("order", kind="stable").drop(columns="order")
        blocks.extend([level, means[CSV_COLUMNS]])
    return pd.concat(blocks, ignore_index=True)


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    frame.to_csv(path, index=False, float_format="%.12g")


def sweep(
    base: SynthSpec,
    noise_levels: Optional[Sequence[float]] = None,
    trials: int = SWEEP_TRIALS,
    methods: Optional[Sequence[str]] = None,
    delta: float = COSNTF_DELTA,
    maxiter: int = COSNTF_MAXITER,
    lam: float = FGM_LAMBDA,
    timing: bool = False,
    out: Optional[Union[str, Path]] = None,
) -> List[ExperimentRecord]:
    """Run every method on ``trials`` synthetic tensors per noise level.

    Trial k of every level uses seed ``base.seed + k``; the selection seed
    of randomized methods is the same. Records come back in canonical order
    (level, trial, method). When ``out`` is given the summarized CSV is
    written there.
    """
    levels = sorted(NOISE_LEVELS if noise_levels is None else noise_levels)
    methods = list(SWEEP_METHODS if methods is None else methods)
    records = []
    for level in levels:
        for trial in range(trials):
            seed = base.seed + trial
            data = gen_synthetic(base.model_copy(update={"noise_level": level, "seed": seed}))
            for method in methods:
                record = run_trial(
                    data.tensor, method, base.r1, base.r2, seed, level,
                    delta=delta, maxiter=maxiter, lam=lam, timing=timing,
                )
                records.append(record)
        logger.info(f"Sweep finished noise level {level:g} ({trials} trials, {len(methods)} methods)")
    if out is not None:
        write_csv(summarize(records), out)
        logger.info(f"Wrote sweep results to {out}")
    return records
