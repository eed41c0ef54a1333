"""Projected fast-gradient solver for the trace-regularized self-dictionary model.

Solves min_Y 1/2 ||M - M Y||_F^2 + lam tr(Y) over

    Omega = {Y : 0 <= Y_ij <= 1, w_i Y_ij <= w_j Y_ii}

with w_j the l1 norm of column j of M. Columns of M whose diagonal entry
in Y stays large are the representative ones.
"""

import logging
from typing import Optional

import numpy as np

from ..config import FGM_LAMBDA, FGM_MAX_ITER, FGM_POWER_ITER, FGM_TOL
from ..models.selection_result import FgmProblem, FgmResult

logger = logging.getLogger(__name__)


def project_omega(y: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Map ``y`` into Omega.

    Entries are clipped to [0, 1]; then off-diagonal entries of row i are
    capped at (w_j / w_i) Y_ii with the clipped diagonal held fixed. Rows and
    columns with zero weight are set to zero. The map is idempotent.
    """
    out = np.clip(y, 0.0, 1.0)
    active = weights > 0
    out[~active, :] = 0.0
    out[:, ~active] = 0.0
    diag = np.diag(out).copy()
    w_safe = np.where(active, weights, 1.0)
    cap = (diag / w_safe)[:, None] * weights[None, :]
    np.minimum(out, cap, out=out)
    np.fill_diagonal(out, diag)
    return out


def lipschitz_constant(gram: np.ndarray, iterations: int = FGM_POWER_ITER) -> float:
    """Largest eigenvalue of the Gram matrix by power iteration."""
    v = np.ones(gram.shape[0]) / np.sqrt(max(gram.shape[0], 1))
    estimate = 0.0
    for _ in range(iterations):
        w = gram @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        estimate = float(v @ gram @ v)
    return estimate


def _objective(gram: np.ndarray, trace_gram: float, y: np.ndarray, gy: np.ndarray, lam: float) -> float:
    # 1/2 ||M - MY||^2 expanded with G = M^T M.
    return 0.5 * trace_gram - float(np.sum(gram * y)) + 0.5 * float(np.sum(y * gy)) + lam * float(np.trace(y))


def fgm_solve(problem: FgmProblem, tol: float = FGM_TOL) -> FgmResult:
    """Run projected accelerated gradient on ``problem``.

    Starts from the identity on the nonzero-weight columns. With
    ``problem.restart`` the momentum is reset whenever a step would raise the
    objective and that step is rejected, so the accepted objective never
    increases. The best iterate is returned when ``max_iter`` is reached.

    Args:
        problem: Data matrix, target count and solver settings.
        tol: Stop once the step length falls below ``tol * (1 + ||Y||_F)``.

    Returns:
        The best iterate, its diagonal, its objective value and the objective
        recorded at the start and at every momentum restart.
    """
    m_mat = np.asarray(problem.M, dtype=float)
    if np.any(m_mat < 0):
        raise ValueError("Self-dictionary selection needs a nonnegative data matrix")
    weights = problem.weights
    cols = m_mat.shape[1]
    lam = problem.lam

    gram = m_mat.T @ m_mat
    trace_gram = float(np.trace(gram))
    lipschitz = lipschitz_constant(gram)
    y = np.diag((weights > 0).astype(float))
    gy = gram @ y
    f_y = _objective(gram, trace_gram, y, gy, lam)
    best, f_best = y, f_y
    checkpoints = [f_y]
    if lipschitz <= 0.0:
        logger.debug("Zero data matrix; returning the starting point")
        return FgmResult(Y=y, diag=np.diag(y).copy(), objective=f_y, iterations=0, checkpoints=checkpoints)

    step = 1.0 / lipschitz
    lam_eye = lam * np.eye(cols)
    z, gz = y, gy
    theta = 1.0
    iterations = 0
    for iterations in range(1, problem.max_iter + 1):
        grad = gz - gram + lam_eye
        y_new = project_omega(z - step * grad, weights)
        gy_new = gram @ y_new
        f_new = _objective(gram, trace_gram, y_new, gy_new, lam)

        if problem.restart and f_new > f_y:
            logger.debug(f"FGM restart at iteration {iterations}: {f_new:.6e} > {f_y:.6e}")
            if z is y:
                # A plain gradient step from the accepted point failed to descend.
                break
            checkpoints.append(f_y)
            z, gz, theta = y, gy, 1.0
            continue

        theta_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * theta * theta))
        beta = (theta - 1.0) / theta_new
        moved = float(np.linalg.norm(y_new - y))
        z = y_new + beta * (y_new - y)
        gz = gy_new + beta * (gy_new - gy)
        y, gy, f_y, theta = y_new, gy_new, f_new, theta_new
        if f_y < f_best:
            best, f_best = y, f_y
        if moved <= tol * (1.0 + float(np.linalg.norm(y))):
            break

    logger.debug(f"FGM finished after {iterations} iterations, objective {f_best:.6e}")
    return FgmResult(
        Y=best,
        diag=np.diag(best).copy(),
        objective=f_best,
        iterations=iterations,
        checkpoints=checkpoints,
    )


def top_diagonal(diag: np.ndarray, weights: np.ndarray, r: int) -> np.ndarray:
    """Indices of the r largest diagonal entries among nonzero-weight columns, ascending."""
    scores = np.where(weights > 0, diag, -np.inf)
    order = np.argsort(-scores, kind="stable")[:r]
    return np.sort(order)


def snmf_fgm_select(
    m_mat: np.ndarray,
    r: int,
    lam: float = FGM_LAMBDA,
    max_iter: int = FGM_MAX_ITER,
    restart: bool = True,
    tol: Optional[float] = None,
) -> np.ndarray:
    """Pick the r most representative columns of a nonnegative matrix.

    Raises:
        ValueError: If r exceeds the number of nonzero columns.
    """
    problem = FgmProblem(M=np.asarray(m_mat, dtype=float), r=r, lam=lam, max_iter=max_iter, restart=restart)
    weights = problem.weights
    active = int(np.count_nonzero(weights > 0))
    if r > active:
        raise ValueError(f"Cannot select {r} columns: only {active} are nonzero")
    result = fgm_solve(problem, tol=FGM_TOL if tol is None else tol)
    return top_diagonal(result.diag, weights, r)
