"""Noisy coseparable synthetic tensors.

The noiseless tensor is the block tensor

    [[S,     S * H    ],
     [M * S, M * S * H]]

with S, M, H uniform on [0, 1]. It is Sinkhorn-scaled by first-slice
diagonal tensors so that every horizontal slice sums to the target,
perturbed by Gaussian noise, clipped at zero and permuted in both modes.
"""

import logging
from typing import Tuple

import numpy as np

from ..config import SINKHORN_MAX_ROUNDS, SINKHORN_TOL
from ..errors import ConvergenceError
from ..models.experiment import SynthSpec, SyntheticTensor
from .tproduct import fnorm, permutation_tensor, scale_tensor, tprod, tprod_chain, ttranspose

logger = logging.getLogger(__name__)


def sinkhorn(
    mat: np.ndarray,
    row_target: float,
    col_target: float,
    max_rounds: int = SINKHORN_MAX_ROUNDS,
    tol: float = SINKHORN_TOL,
) -> Tuple[np.ndarray, np.ndarray]:
    """Find positive dr, dc with row sums of diag(dr) mat diag(dc) equal to row_target and column sums to col_target.

    Raises:
        ValueError: If ``mat`` has a zero row or column, or the totals disagree.
        ConvergenceError: If the relative deviation stays above ``tol`` after ``max_rounds``.
    """
    mat = np.asarray(mat, dtype=float)
    rows, cols = mat.shape
    if np.any(mat.sum(axis=1) <= 0) or np.any(mat.sum(axis=0) <= 0):
        raise ValueError("Sinkhorn scaling needs every row and column to have a positive sum")
    if not np.isclose(rows * row_target, cols * col_target, rtol=1e-12):
        raise ValueError(f"Row total {rows * row_target} and column total {cols * col_target} differ")

    dr = np.ones(rows)
    dc = np.ones(cols)
    deviation = np.inf
    for rounds in range(1, max_rounds + 1):
        dr = row_target / (mat @ dc)
        dc = col_target / (mat.T @ dr)
        scaled = dr[:, None] * mat * dc[None, :]
        deviation = max(
            float(np.max(np.abs(scaled.sum(axis=1) - row_target))) / row_target,
            float(np.max(np.abs(scaled.sum(axis=0) - col_target))) / col_target,
        )
        if deviation <= tol:
            logger.debug(f"Sinkhorn scaling converged in {rounds} rounds")
            return dr, dc
    raise ConvergenceError(f"Sinkhorn scaling did not converge in {max_rounds} rounds", residual=deviation)


def coseparable_block(s: np.ndarray, m_factor: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Assemble [[S, S*H], [M*S, M*S*H]]."""
    sh = tprod(s, h)
    top = np.concatenate([s, sh], axis=1)
    bottom = np.concatenate([tprod(m_factor, s), tprod(m_factor, sh)], axis=1)
    return np.concatenate([top, bottom], axis=0)


def gen_synthetic(spec: SynthSpec) -> SyntheticTensor:
    """Generate a noisy co-(r1, r2)-separable tensor and its ground truth.

    Randomness comes from ``numpy.random.default_rng(spec.seed)`` (PCG64),
    drawn in a fixed order: S, M, H, noise, then the two permutations.
    The returned I, J are 0-based, listed in core order, and refer to the
    permuted tensor.
    """
    m, n, p, r1, r2 = spec.m, spec.n, spec.p, spec.r1, spec.r2
    rng = np.random.default_rng(spec.seed)
    s = rng.uniform(0.0, 1.0, size=(r1, r2, p))
    m_factor = rng.uniform(0.0, 1.0, size=(m - r1, r1, p))
    h = rng.uniform(0.0, 1.0, size=(r2, n - r2, p))
    block = np.maximum(coseparable_block(s, m_factor, h), 0.0)

    dr, dc = sinkhorn(block.sum(axis=2), spec.slice_sum, spec.slice_sum * m / n)
    scaled = scale_tensor(block, dr, dc)

    noise = rng.standard_normal(size=scaled.shape)
    noisy = scaled
    if spec.noise_level > 0.0:
        noise *= spec.noise_level * fnorm(scaled) / fnorm(noise)
        noisy = np.maximum(scaled + noise, 0.0)

    perm_rows = rng.permutation(m)
    perm_cols = rng.permutation(n)
    left = permutation_tensor(perm_rows, p)
    right = ttranspose(permutation_tensor(perm_cols, p))
    tensor = np.maximum(tprod_chain(left, noisy, right), 0.0)
    noiseless = np.maximum(tprod_chain(left, scaled, right), 0.0)

    truth_rows = np.argsort(perm_rows)[:r1]
    truth_cols = np.argsort(perm_cols)[:r2]
    logger.info(f"Generated co-({r1},{r2}) tensor {m}x{n}x{p}, noise {spec.noise_level:g}, seed {spec.seed}")
    return SyntheticTensor(tensor=tensor, noiseless=noiseless, I=truth_rows, J=truth_cols, spec=spec)
