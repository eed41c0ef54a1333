"""t-SVD, t-inverse, t-pseudoinverse and rank notions, computed slice-wise in the Fourier domain.

Only slices 0..p//2 of the spectrum are factorized; the remaining ones
are their complex conjugates, so every inverse transform is real.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config import JACOBI_MAX_SWEEPS, JACOBI_TOL, RANK_TOL, SVD_BACKEND
from ..errors import ConvergenceError, DimensionError, SingularSliceError
from ..models.linalg_result import RankReport, TsvdFactors
from .tproduct import dft3, fnorm, idft3

logger = logging.getLogger(__name__)


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Pairings of a round-robin tournament; every column pair meets once per sweep."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        left = np.array(players[: size // 2])
        right = np.array(players[size // 2:][::-1])
        keep = (left >= 0) & (right >= 0)
        rounds.append((left[keep], right[keep]))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _jacobi_tall(a: np.ndarray, max_sweeps: int, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """One-sided Jacobi on a matrix with rows >= cols; returns (A V, V)."""
    rows, cols = a.shape
    work = a.astype(complex, copy=True)
    v = np.eye(cols, dtype=complex)
    if cols == 1:
        return work, v
    # Below rows * eps the off-diagonal ratio is rounding noise.
    tol = max(tol, rows * np.finfo(float).eps)
    schedule = _round_robin(cols)
    off = np.inf
    for sweep in range(max_sweeps):
        off = 0.0
        for left, right in schedule:
            ai = work[:, left]
            aj = work[:, right]
            alpha = np.einsum("ij,ij->j", ai.conj(), ai).real
            beta = np.einsum("ij,ij->j", aj.conj(), aj).real
            gamma = np.einsum("ij,ij->j", ai.conj(), aj)
            g_abs = np.abs(gamma)
            scale = np.sqrt(alpha * beta)
            active = (scale > 0) & (g_abs > tol * scale)
            if not np.any(active):
                continue
            off = max(off, float(np.max(g_abs[active] / scale[active])))
            g_safe = np.where(active, g_abs, 1.0)
            zeta = (beta - alpha) / (2.0 * g_safe)
            sign = np.where(zeta >= 0, 1.0, -1.0)
            t = sign / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = np.where(active, 1.0 / np.sqrt(1.0 + t * t), 1.0)
            s = np.where(active, c * t, 0.0)
            phase = np.where(active, gamma / g_safe, 1.0)

            vi = v[:, left]
            vj = v[:, right]
            work[:, left] = c * ai - (s * phase.conj()) * aj
            work[:, right] = (s * phase) * ai + c * aj
            v[:, left] = c * vi - (s * phase.conj()) * vj
            v[:, right] = (s * phase) * vi + c * vj
        logger.debug(f"Jacobi sweep {sweep + 1}: max off-diagonal ratio {off:.3e}")
        if off == 0.0:
            return work, v
    raise ConvergenceError(f"One-sided Jacobi did not converge in {max_sweeps} sweeps", residual=off)


def _complete_basis(u_cols: np.ndarray, size: int) -> np.ndarray:
    """Extend orthonormal columns to a square unitary matrix."""
    r = u_cols.shape[1]
    if r == size:
        return u_cols
    q, _ = np.linalg.qr(np.hstack([u_cols, np.eye(size, dtype=u_cols.dtype)]))
    return np.hstack([u_cols, q[:, r:size]])


def _jacobi_svd(mat: np.ndarray, max_sweeps: int, tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows, cols = mat.shape
    if rows < cols:
        u, sigma, v = _jacobi_svd(mat.conj().T, max_sweeps, tol)
        return v, sigma, u

    av, v = _jacobi_tall(mat, max_sweeps, tol)
    sigma = np.linalg.norm(av, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    av = av[:, order]
    v = v[:, order]

    cutoff = max(rows, cols) * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    nonzero = int(np.count_nonzero(sigma > cutoff)) if sigma.size and sigma[0] > 0 else 0
    u_cols = av[:, :nonzero] / sigma[:nonzero]
    u = _complete_basis(u_cols, rows)
    return u, sigma, v


def complex_svd(
    mat: np.ndarray,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    tol: float = JACOBI_TOL,
    backend: Optional[str] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``mat = U[:, :k] diag(sigma) V[:, :k]^H`` with k = min(rows, cols).

    Args:
        mat: Real or complex matrix.
        max_sweeps: Jacobi sweep cap.
        tol: Relative threshold on |a_i^H a_j| / (||a_i|| ||a_j||) below which a pair is orthogonal.
        backend: ``"jacobi"`` (default from config) or ``"lapack"``.

    Returns:
        Unitary U (rows x rows), nonincreasing sigma (length k), unitary V (cols x cols).

    Raises:
        ConvergenceError: If the Jacobi sweeps hit ``max_sweeps``.
    """
    mat = np.asarray(mat)
    if not np.all(np.isfinite(mat)):
        raise ValueError("Cannot factorize a matrix with non-finite entries")
    backend = (backend or SVD_BACKEND).lower()
    if backend == "lapack":
        u, sigma, vh = np.linalg.svd(mat, full_matrices=True)
        return u, sigma, vh.conj().T
    if backend != "jacobi":
        raise ValueError(f"Unknown SVD backend: {backend}")
    return _jacobi_svd(mat, max_sweeps, tol)


def _half_spectrum(p: int) -> range:
    return range(p // 2 + 1)


def _spectral_slice(t_hat: np.ndarray, k: int) -> np.ndarray:
    # Slice 0 (and p/2 for even p) is real for real input.
    p = t_hat.shape[2]
    if k == 0 or 2 * k == p:
        return t_hat[:, :, k].real
    return t_hat[:, :, k]


def _mirror(hat: np.ndarray) -> None:
    """Fill slices above p//2 with the conjugates of their partners, in place."""
    p = hat.shape[2]
    for k in range(p // 2 + 1, p):
        hat[:, :, k] = np.conj(hat[:, :, p - k])


def spectral_singular_values(t: np.ndarray) -> np.ndarray:
    """Singular values of every Fourier-domain slice, shape min(m, n) x p."""
    m, n, p = t.shape
    t_hat = dft3(t)
    out = np.zeros((min(m, n), p))
    for k in _half_spectrum(p):
        _, sigma, _ = complex_svd(_spectral_slice(t_hat, k))
        out[:, k] = sigma
    for k in range(p // 2 + 1, p):
        out[:, k] = out[:, p - k]
    return out


def tsvd(t: np.ndarray) -> TsvdFactors:
    """t-SVD A = W * Sigma * V^T with orthogonal W, V and f-diagonal Sigma."""
    m, n, p = t.shape
    k_max = min(m, n)
    t_hat = dft3(t)
    w_hat = np.zeros((m, m, p), dtype=complex)
    s_hat = np.zeros((m, n, p), dtype=complex)
    v_hat = np.zeros((n, n, p), dtype=complex)
    spectral_sigma = np.zeros((k_max, p))
    diag = np.arange(k_max)
    for k in _half_spectrum(p):
        u, sigma, v = complex_svd(_spectral_slice(t_hat, k))
        w_hat[:, :, k] = u
        v_hat[:, :, k] = v
        s_hat[diag, diag, k] = sigma
        spectral_sigma[:, k] = sigma
    _mirror(w_hat)
    _mirror(s_hat)
    _mirror(v_hat)
    for k in range(p // 2 + 1, p):
        spectral_sigma[:, k] = spectral_sigma[:, p - k]

    sigma_t = idft3(s_hat)
    off_diagonal = np.ones((m, n), dtype=bool)
    off_diagonal[diag, diag] = False
    sigma_t[off_diagonal, :] = 0.0
    return TsvdFactors(W=idft3(w_hat), Sigma=sigma_t, V=idft3(v_hat), spectral_sigma=spectral_sigma)


def tpinv(t: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse, n x m x p.

    Singular values at or below ``rank_tol * sigma_max`` (over all slices)
    are treated as zero.
    """
    m, n, p = t.shape
    t_hat = dft3(t)
    factors = {k: complex_svd(_spectral_slice(t_hat, k)) for k in _half_spectrum(p)}
    sigma_max = max((float(f[1][0]) for f in factors.values() if f[1].size), default=0.0)
    cutoff = rank_tol * sigma_max
    out_hat = np.zeros((n, m, p), dtype=complex)
    for k, (u, sigma, v) in factors.items():
        keep = sigma > cutoff
        if sigma_max == 0.0 or not np.any(keep):
            continue
        r = int(np.count_nonzero(keep))
        out_hat[:, :, k] = (v[:, :r] / sigma[:r]) @ u[:, :r].conj().T
    _mirror(out_hat)
    return idft3(out_hat)


def tinv(t: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Inverse of a square tensor.

    Raises:
        DimensionError: If the frontal slices are not square.
        SingularSliceError: If a spectral slice has smallest singular value at or
            below ``rank_tol * sigma_max``; the error names the 1-based slice.
    """
    m, n, p = t.shape
    if m != n:
        raise DimensionError(f"t-inverse needs square frontal slices, got {m} x {n}")
    t_hat = dft3(t)
    factors = {k: complex_svd(_spectral_slice(t_hat, k)) for k in _half_spectrum(p)}
    sigma_max = max(float(f[1][0]) for f in factors.values())
    out_hat = np.zeros((n, n, p), dtype=complex)
    for k, (u, sigma, v) in factors.items():
        if sigma_max == 0.0 or sigma[-1] <= rank_tol * sigma_max:
            raise SingularSliceError(k + 1, float(sigma[-1]))
        out_hat[:, :, k] = (v / sigma) @ u.conj().T
    _mirror(out_hat)
    return idft3(out_hat)


def ranks(t: np.ndarray, rank_tol: float = RANK_TOL) -> RankReport:
    """Multirank, tubal rank and stable rank with a tolerance relative to sigma_max."""
    p = t.shape[2]
    sigma = spectral_singular_values(t)
    sigma_max = float(sigma.max()) if sigma.size else 0.0
    if sigma_max == 0.0:
        return RankReport(multirank=[0] * p, tubalrank=0, stable_rank=0.0, rank_tol=rank_tol)
    cutoff = rank_tol * sigma_max
    multirank = [int(np.count_nonzero(sigma[:, k] > cutoff)) for k in range(p)]
    # ||Sigma_ii:||_F^2 = (1/p) sum_k sigma_i(A_k)^2 by Parseval.
    tube_norms = np.sqrt(np.sum(sigma ** 2, axis=1) / p)
    tubalrank = int(np.count_nonzero(tube_norms > cutoff))
    stable_rank = fnorm(t) ** 2 / sigma_max ** 2
    return RankReport(multirank=multirank, tubalrank=tubalrank, stable_rank=stable_rank, rank_tol=rank_tol)
