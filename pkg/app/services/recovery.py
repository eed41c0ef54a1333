"""Nonnegative factor recovery around a selected coseparable core."""

import logging
from typing import Optional, Sequence

import numpy as np

from ..config import NNLS_INNER_ITER, NNLS_TOL, RECOVERY_DELTA, RECOVERY_MAXITER
from ..models.cosep_model import CosepCertificate, CosepModel
from .sampling import tcur_reconstruct
from .scoring import rel_error
from .tlinalg import tpinv
from .tproduct import as_tensor3, bcirc, fnorm, fold, subtensor, tprod, tprod_chain, ttranspose, unfold

logger = logging.getLogger(__name__)

DIAG_FLOOR = 1e-16


def _hals(
    gram: np.ndarray,
    cross: np.ndarray,
    x: np.ndarray,
    b_sq: float,
    inner_iter: int,
    tol: float,
) -> np.ndarray:
    """Row-wise coordinate descent on min ||B - QX||^2 given Q^T Q, Q^T B and ||B||^2."""
    active_rows = [k for k in range(gram.shape[0]) if gram[k, k] > DIAG_FLOOR]
    previous = None
    for sweep in range(inner_iter):
        for k in active_rows:
            x[k] = np.maximum(0.0, x[k] + (cross[k] - gram[k] @ x) / gram[k, k])
        value = b_sq - 2.0 * float(np.sum(x * cross)) + float(np.sum(x * (gram @ x)))
        if previous is not None and abs(previous - value) <= tol * max(abs(previous), np.finfo(float).tiny):
            break
        previous = value
    return x


def nnls_cd(
    b: np.ndarray,
    q: np.ndarray,
    x0: Optional[np.ndarray] = None,
    inner_iter: int = NNLS_INNER_ITER,
    tol: float = NNLS_TOL,
) -> np.ndarray:
    """Solve min_{X >= 0} ||B - Q X||_F^2 by coordinate descent over the rows of X.

    Each sweep updates x_k <- max(0, x_k + (Q^T (B - Q X))_k / (Q^T Q)_kk);
    rows with (Q^T Q)_kk <= 1e-16 are left untouched. The residual is
    nonincreasing over sweeps.

    Args:
        b: Right-hand side, rows x cols.
        q: System matrix, rows x k.
        x0: Nonnegative start (k x cols); zeros when omitted.
        inner_iter: Maximum number of sweeps.
        tol: Stop when the relative change of the residual drops below this.

    Returns:
        Nonnegative k x cols solution.
    """
    b = np.asarray(b, dtype=float)
    q = np.asarray(q, dtype=float)
    if q.shape[0] != b.shape[0]:
        raise ValueError(f"NNLS shapes do not conform: Q is {q.shape}, B is {b.shape}")
    x = np.zeros((q.shape[1], b.shape[1])) if x0 is None else np.maximum(np.array(x0, dtype=float), 0.0)
    return _hals(q.T @ q, q.T @ b, x, float(np.sum(b * b)), inner_iter, tol)


def _solve_right(target: np.ndarray, left: np.ndarray, x0: Optional[np.ndarray]) -> np.ndarray:
    """min_{X >= 0} ||unfold(target) - bcirc(left) unfold(X)||, returned folded."""
    p = target.shape[2]
    q = bcirc(left)
    x = nnls_cd(unfold(target), q, None if x0 is None else unfold(x0))
    return fold(x, p)


def recover_factors(
    t: np.ndarray,
    rows: Sequence[int],
    cols: Sequence[int],
    maxiter: int = RECOVERY_MAXITER,
    delta: float = RECOVERY_DELTA,
) -> CosepModel:
    """Fit nonnegative P1, P2 with A ~ P1 * A(I, J, :) * P2 by alternating NNLS.

    P1 starts from the unstructured least-squares fit of unfold(A) on
    unfold(A(I, :, :)) and P2 from the fit on bcirc(A(:, J, :)). Each
    alternation then updates P2 against bcirc(P1 * core) and P1 against
    bcirc((core * P2)^T) in transposed form, both warm-started, until
    ||dP1||_F + ||dP2||_F <= delta.

    Raises:
        ValueError: If ``t`` has negative entries.
        IndexRangeError: If an index is out of range.
    """
    t = as_tensor3(t)
    if np.any(t < 0):
        raise ValueError("Factor recovery needs a nonnegative tensor")
    m, n, p = t.shape
    core = subtensor(t, rows, cols)
    r1, r2, _ = core.shape
    a_mat = unfold(t)

    # Unstructured start: unfold(A)^T ~ unfold(A_I)^T Q1^T, keep the first r1 columns of Q1.
    q1_t = nnls_cd(a_mat.T, unfold(subtensor(t, rows=rows)).T)
    p1 = fold(np.ascontiguousarray(q1_t.T[:, :r1]), p)
    p2 = _solve_right(t, subtensor(t, cols=cols), None)

    t_transposed = ttranspose(t)
    history = []
    converged = False
    iteration = 0
    for iteration in range(1, maxiter + 1):
        p1_old, p2_old = p1, p2
        p2 = _solve_right(t, tprod(p1, core), p2)
        p1 = ttranspose(_solve_right(t_transposed, ttranspose(tprod(core, p2)), ttranspose(p1)))

        objective = fnorm(t - tprod_chain(p1, core, p2)) ** 2
        if history and objective > history[-1] * (1.0 + 1e-9) + 1e-14:
            logger.warning(f"Recovery objective rose from {history[-1]:.6e} to {objective:.6e}")
        history.append(objective)
        change = fnorm(p1_old - p1) + fnorm(p2_old - p2)
        logger.debug(f"Recovery alternation {iteration}: objective {objective:.6e}, change {change:.3e}")
        if change <= delta:
            converged = True
            break

    if converged:
        logger.info(f"Factor recovery converged after {iteration} alternations")
    else:
        logger.warning(f"Factor recovery stopped at maxiter={maxiter}")
    return CosepModel(
        P1=p1,
        core=core,
        P2=p2,
        I=np.asarray(rows, dtype=int),
        J=np.asarray(cols, dtype=int),
        iterations=iteration,
        converged=converged,
        objective_history=history,
    )


def reconstruct(model: CosepModel) -> np.ndarray:
    """P1 * core * P2."""
    return tprod_chain(model.P1, model.core, model.P2)


def coseparability_certificate(
    t: np.ndarray,
    rows: Sequence[int],
    cols: Sequence[int],
    tol: float = 1e-8,
) -> CosepCertificate:
    """Check whether (I, J) gives an exact t-CUR with nonnegative outer factors.

    When A = C * pinv(U) * R holds and both C * pinv(U) and pinv(U) * R are
    nonnegative, they are valid P1 and P2 for the core U = A(I, J, :).
    """
    t = as_tensor3(t)
    c = subtensor(t, cols=cols)
    u = subtensor(t, rows, cols)
    r = subtensor(t, rows=rows)
    u_pinv = tpinv(u)
    error = rel_error(t, tcur_reconstruct(c, u, r))
    left = tprod(c, u_pinv)
    right = tprod(u_pinv, r)
    slack = tol * max(1.0, float(np.max(np.abs(left))), float(np.max(np.abs(right))))
    return CosepCertificate(
        exact_tcur=error <= tol,
        left_nonneg=bool(np.min(left) >= -slack),
        right_nonneg=bool(np.min(right) >= -slack),
        tcur_error=error,
    )
