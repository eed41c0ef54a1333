"""Randomized slice sampling: t-CUR, t-DEIM and the t-CUR-DEIM index selector."""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..config import TCUR_MAX_ROUNDS
from ..errors import DimensionError, SamplingError, SingularSliceError
from ..models.sampling_result import DeimResult, SamplingDistribution, TcurResult
from ..models.selection_result import SelectionResult
from .tlinalg import tinv, tpinv, tsvd
from .tproduct import (
    as_tensor3,
    dedup_first_occurrence,
    horizontal_slice_norms,
    lateral_slice_norms,
    subtensor,
    tprod,
    tprod_chain,
)

logger = logging.getLogger(__name__)

DEIM_RESIDUAL_TOL = 1e-8


def oversample_count(r: int, dim: int) -> int:
    """Draws per sampling round: ceil(r ln dim), at least r and at most dim."""
    if dim <= 1:
        return 1
    return min(max(r, math.ceil(r * math.log(dim))), dim)


def build_distribution(
    t: np.ndarray,
    mode: str = "horizontal",
    kind: str = "uniform",
    r: Optional[int] = None,
) -> SamplingDistribution:
    """Build a sampling distribution over the horizontal or lateral slices of ``t``.

    Args:
        t: Tensor of shape (m, n, p).
        mode: ``"horizontal"`` (indices in 0..m-1) or ``"lateral"`` (0..n-1).
        kind: ``"uniform"``, ``"slice"`` (proportional to squared slice norms) or
            ``"leverage"`` (rank-r leverage scores from the t-SVD).
        r: Target tubal rank, required for leverage scores.

    Returns:
        The distribution; zero slices get weight 0 under ``slice`` and ``leverage``.

    Raises:
        ValueError: For an unknown mode or kind, or leverage without a valid ``r``.
    """
    t = as_tensor3(t)
    if mode not in ("horizontal", "lateral"):
        raise ValueError(f"Unknown sampling mode: {mode}")
    dim = t.shape[0] if mode == "horizontal" else t.shape[1]
    slice_norms = horizontal_slice_norms(t, squared=True) if mode == "horizontal" else lateral_slice_norms(t, squared=True)

    if kind == "uniform":
        weights = np.full(dim, 1.0 / dim)
    elif kind == "slice":
        weights = slice_norms.copy()
    elif kind == "leverage":
        if r is None:
            raise ValueError("Leverage score sampling needs the target rank r")
        if r < 1 or r > min(t.shape[0], t.shape[1]):
            raise ValueError(f"Leverage rank r={r} must lie in 1..{min(t.shape[0], t.shape[1])}")
        factors = tsvd(t)
        basis = factors.W if mode == "horizontal" else factors.V
        weights = np.einsum("ijk,ijk->i", basis[:, :r, :], basis[:, :r, :]) / r
        weights[slice_norms == 0.0] = 0.0
    else:
        raise ValueError(f"Unknown sampling distribution: {kind}")

    total = float(weights.sum())
    if total <= 0.0:
        logger.warning(f"All {mode} slices are zero; falling back to uniform weights")
        weights = np.full(dim, 1.0 / dim)
    else:
        weights = weights / total
    return SamplingDistribution(kind=kind, mode=mode, weights=weights, r=r)


def _sample_unique(
    rng: np.random.Generator,
    dist: SamplingDistribution,
    draws: int,
    min_unique: int,
    max_rounds: int,
) -> Tuple[np.ndarray, int]:
    support = int(np.count_nonzero(dist.weights > 0))
    if min_unique > support:
        raise SamplingError(
            f"Need {min_unique} distinct {dist.mode} indices but only {support} have positive weight"
        )
    sampled = np.empty(0, dtype=int)
    for rounds in range(1, max_rounds + 1):
        batch = rng.choice(dist.weights.size, size=draws, replace=True, p=dist.weights)
        sampled = dedup_first_occurrence(np.concatenate([sampled, batch]))
        if sampled.size >= min_unique:
            return sampled, rounds
        logger.debug(f"Round {rounds}: {sampled.size} distinct {dist.mode} indices, need {min_unique}")
    raise SamplingError(
        f"Only {sampled.size} distinct {dist.mode} indices after {max_rounds} rounds, need {min_unique}"
    )


def tcur(
    t: np.ndarray,
    d1: int,
    d2: int,
    dist_i: SamplingDistribution,
    dist_j: SamplingDistribution,
    seed: int = 0,
    min_rows: int = 1,
    min_cols: int = 1,
    max_rounds: int = TCUR_MAX_ROUNDS,
) -> TcurResult:
    """Sample horizontal and lateral slices and return C = A[:, J], U = A[I, J], R = A[I, :].

    Each round draws ``d1`` (``d2``) indices with replacement; duplicates are
    removed keeping the first occurrence. Rounds are appended until at least
    ``min_rows`` (``min_cols``) distinct indices exist.

    Raises:
        SamplingError: If the distinct counts are not reached within ``max_rounds``.
    """
    t = as_tensor3(t)
    m, n, _ = t.shape
    if dist_i.weights.size != m or dist_j.weights.size != n:
        raise DimensionError(
            f"Distributions of length {dist_i.weights.size}, {dist_j.weights.size} do not fit {t.shape}"
        )
    if d1 < 1 or d2 < 1:
        raise ValueError(f"Sample sizes must be positive, got d1={d1}, d2={d2}")
    rng_i, rng_j = (np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(2))
    rows, rounds_i = _sample_unique(rng_i, dist_i, d1, min_rows, max_rounds)
    cols, rounds_j = _sample_unique(rng_j, dist_j, d2, min_cols, max_rounds)
    return TcurResult(
        C=subtensor(t, cols=cols),
        U=subtensor(t, rows, cols),
        R=subtensor(t, rows=rows),
        I=rows,
        J=cols,
        rounds=max(rounds_i, rounds_j),
    )


def tcur_reconstruct(c: np.ndarray, u: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Return C * pinv(U) * R."""
    return tprod_chain(c, tpinv(u), r)


def tdeim(u: np.ndarray) -> DeimResult:
    """Greedy t-DEIM selection of one horizontal index per lateral slice of ``u``.

    Args:
        u: Tensor of shape (m, n, p) with n <= m, typically orthogonal factors of a t-SVD.

    Returns:
        n distinct 0-based indices. Steps where the running square subtensor was
        singular are solved with the pseudo-inverse and listed in ``pinv_steps``;
        ``chosen_residuals`` holds the residual left at earlier picks by every step.
    """
    u = as_tensor3(u, "basis")
    m, n, _ = u.shape
    if n > m:
        raise DimensionError(f"t-DEIM needs at most as many lateral as horizontal slices, got {u.shape}")

    first = np.sqrt(np.einsum("ik,ik->i", u[:, 0, :], u[:, 0, :]))
    chosen = [int(np.argmax(first))]
    pinv_steps = []
    chosen_residuals = []
    for j in range(1, n):
        idx = np.asarray(chosen)
        square = u[np.ix_(idx, np.arange(j))]
        try:
            inverse = tinv(square)
            fallback = False
        except SingularSliceError as e:
            logger.warning(f"t-DEIM step {j + 1}: {str(e)}; using the pseudo-inverse")
            inverse = tpinv(square)
            fallback = True
            pinv_steps.append(j + 1)

        coeff = tprod(inverse, u[idx, j:j + 1, :])
        residual = u[:, j:j + 1, :] - tprod(u[:, :j, :], coeff)
        norms = np.sqrt(np.einsum("ik,ik->i", residual[:, 0, :], residual[:, 0, :]))

        at_chosen = float(norms[idx].max())
        chosen_residuals.append(at_chosen)
        if not fallback and at_chosen > DEIM_RESIDUAL_TOL * (1.0 + float(np.linalg.norm(u[:, j, :]))):
            logger.warning(f"t-DEIM step {j + 1}: residual {at_chosen:.3e} at chosen indices")
        norms[idx] = -np.inf
        chosen.append(int(np.argmax(norms)))
    return DeimResult(
        indices=np.asarray(chosen, dtype=int), pinv_steps=pinv_steps, chosen_residuals=chosen_residuals
    )


def _fill_positions(deim: np.ndarray, sampled: np.ndarray, count: int) -> np.ndarray:
    """Map DEIM positions into ``sampled``; positions outside it are skipped and gaps filled in sampling order."""
    valid = [int(pos) for pos in deim if pos < sampled.size]
    picked = list(dict.fromkeys(sampled[valid].tolist()))[:count]
    for index in sampled.tolist():
        if len(picked) >= count:
            break
        if index not in picked:
            picked.append(index)
    return np.asarray(picked, dtype=int)


def tcur_deim_select(
    t: np.ndarray,
    r1: int,
    r2: int,
    seed: int = 0,
    dist: str = "uniform",
    swap: bool = False,
) -> SelectionResult:
    """Select a coseparable core by t-CUR sampling followed by t-DEIM.

    Samples ceil(r1 ln m) horizontal and ceil(r2 ln n) lateral slices, takes
    the t-SVD U = W * S * V^T of the intersection and runs t-DEIM on V for the
    horizontal indices and on W for the lateral ones. ``swap`` exchanges the
    two bases.

    Raises:
        ValueError: If r1 > m or r2 > n.
        SamplingError: If too few distinct slices can be drawn.
    """
    t = as_tensor3(t)
    m, n, _ = t.shape
    if not (1 <= r1 <= m and 1 <= r2 <= n):
        raise ValueError(f"Need 1 <= r1 <= {m} and 1 <= r2 <= {n}, got r1={r1}, r2={r2}")

    dist_i = build_distribution(t, "horizontal", dist, r=r1 if dist == "leverage" else None)
    dist_j = build_distribution(t, "lateral", dist, r=r2 if dist == "leverage" else None)
    cur = tcur(
        t,
        oversample_count(r1, m),
        oversample_count(r2, n),
        dist_i,
        dist_j,
        seed=seed,
        min_rows=r1,
        min_cols=r2,
    )
    factors = tsvd(cur.U)
    basis_i, basis_j = (factors.W, factors.V) if swap else (factors.V, factors.W)
    p_idx = tdeim(basis_i).indices
    q_idx = tdeim(basis_j).indices
    rows = _fill_positions(p_idx, cur.I, r1)
    cols = _fill_positions(q_idx, cur.J, r2)
    logger.info(f"t-CUR-DEIM ({dist}) selected {rows.size} horizontal and {cols.size} lateral slices")
    return SelectionResult(I=rows, J=cols, method=f"tcur-{dist}", outer_iterations=cur.rounds)
