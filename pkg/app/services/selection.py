"""Coseparable core selection: alternating CoS-NTF, the hybrid pre-sampled variant and a method dispatcher."""

import logging
from typing import Optional

import numpy as np

from ..config import COSNTF_DELTA, COSNTF_MAXITER, FGM_LAMBDA, FGM_MAX_ITER
from ..models.selection_result import SelectionResult
from .fgm import snmf_fgm_select
from .sampling import build_distribution, oversample_count, tcur, tcur_deim_select
from .tproduct import as_tensor3, fnorm, subtensor, ttranspose, unfold

logger = logging.getLogger(__name__)

SELECTION_METHODS = ("cosntf", "tcur", "hybrid")


def _check_request(t: np.ndarray, r1: int, r2: int) -> None:
    m, n, _ = t.shape
    if not (1 <= r1 <= m and 1 <= r2 <= n):
        raise ValueError(f"Need 1 <= r1 <= {m} and 1 <= r2 <= {n}, got r1={r1}, r2={r2}")
    if np.any(t < 0):
        raise ValueError("Coseparable selection needs a nonnegative tensor")


def cosntf_select(
    t: np.ndarray,
    r1: int,
    r2: int,
    delta: float = COSNTF_DELTA,
    maxiter: int = COSNTF_MAXITER,
    lam: float = FGM_LAMBDA,
    fgm_iter: int = FGM_MAX_ITER,
) -> SelectionResult:
    """Alternate self-dictionary selections of horizontal and lateral slices.

    Horizontal indices are the representative columns of unfold(A(:, J, :)^T)
    (all lateral slices on the first pass), lateral indices those of
    unfold(A(I, :, :)). The loop stops once
    ||A_I_old - A(I, :, :)||_F + ||A_J_old - A(:, J, :)||_F <= delta.

    Args:
        t: Nonnegative tensor of shape (m, n, p).
        r1: Number of horizontal slices to keep.
        r2: Number of lateral slices to keep.
        delta: Threshold on the change of the selected slices.
        maxiter: Cap on alternations after the initial pass.
        lam: Trace regularization weight of both subproblems.
        fgm_iter: Iteration cap of each fast-gradient solve.

    Returns:
        Sorted 0-based indices with the criterion value of every alternation.
        ``converged`` is False when ``maxiter`` was reached.
    """
    t = as_tensor3(t)
    _check_request(t, r1, r2)

    def select_rows(cols: Optional[np.ndarray]) -> np.ndarray:
        return snmf_fgm_select(unfold(ttranspose(subtensor(t, cols=cols))), r1, lam=lam, max_iter=fgm_iter)

    def select_cols(rows: np.ndarray) -> np.ndarray:
        return snmf_fgm_select(unfold(subtensor(t, rows=rows)), r2, lam=lam, max_iter=fgm_iter)

    rows = select_rows(None)
    cols = select_cols(rows)
    history = []
    converged = False
    iteration = 0
    for iteration in range(1, maxiter + 1):
        old_rows = subtensor(t, rows=rows)
        old_cols = subtensor(t, cols=cols)
        rows = select_rows(cols)
        cols = select_cols(rows)
        change = fnorm(old_rows - subtensor(t, rows=rows)) + fnorm(old_cols - subtensor(t, cols=cols))
        history.append(change)
        logger.debug(f"CoS-NTF alternation {iteration}: change {change:.3e}")
        if change <= delta:
            converged = True
            break

    if converged:
        logger.info(f"CoS-NTF selection converged after {iteration} alternations")
    else:
        last = history[-1] if history else float("nan")
        logger.warning(f"CoS-NTF selection stopped at maxiter={maxiter} (last change {last:.3e})")
    return SelectionResult(
        I=rows,
        J=cols,
        method="cosntf",
        outer_iterations=iteration,
        converged=converged,
        history=history,
    )


def hybrid_select(
    t: np.ndarray,
    r1: int,
    r2: int,
    seed: int = 0,
    delta: float = COSNTF_DELTA,
    maxiter: int = COSNTF_MAXITER,
    lam: float = FGM_LAMBDA,
) -> SelectionResult:
    """Run CoS-NTF on a uniformly pre-sampled subtensor and map the indices back."""
    t = as_tensor3(t)
    _check_request(t, r1, r2)
    m, n, _ = t.shape
    sample = tcur(
        t,
        oversample_count(r1, m),
        oversample_count(r2, n),
        build_distribution(t, "horizontal", "uniform"),
        build_distribution(t, "lateral", "uniform"),
        seed=seed,
        min_rows=r1,
        min_cols=r2,
    )
    rows = np.sort(sample.I)
    cols = np.sort(sample.J)
    logger.info(f"Hybrid selection pre-sampled {rows.size} of {m} horizontal and {cols.size} of {n} lateral slices")
    inner = cosntf_select(subtensor(t, rows, cols), r1, r2, delta=delta, maxiter=maxiter, lam=lam)
    return SelectionResult(
        I=rows[inner.I],
        J=cols[inner.J],
        method="hybrid",
        outer_iterations=inner.outer_iterations,
        converged=inner.converged,
        history=inner.history,
    )


def select_indices(
    t: np.ndarray,
    method: str,
    r1: int,
    r2: int,
    seed: int = 0,
    dist: str = "uniform",
    delta: float = COSNTF_DELTA,
    maxiter: int = COSNTF_MAXITER,
    lam: float = FGM_LAMBDA,
    swap: bool = False,
) -> SelectionResult:
    """Dispatch to a selector by name.

    ``method`` is ``cosntf``, ``hybrid``, ``tcur`` (with ``dist``) or one of
    the sweep tags ``tcur-uniform``, ``tcur-slice``, ``tcur-leverage``.
    """
    if method == "cosntf":
        return cosntf_select(t, r1, r2, delta=delta, maxiter=maxiter, lam=lam)
    if method == "hybrid":
        return hybrid_select(t, r1, r2, seed=seed, delta=delta, maxiter=maxiter, lam=lam)
    if method == "tcur":
        return tcur_deim_select(t, r1, r2, seed=seed, dist=dist, swap=swap)
    if method.startswith("tcur-"):
        return tcur_deim_select(t, r1, r2, seed=seed, dist=method[len("tcur-"):], swap=swap)
    raise ValueError(f"Unknown selection method: {method}. Supported: {', '.join(SELECTION_METHODS)}")
