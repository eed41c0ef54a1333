"""Third-order tensor algebra under the t-product.

Tensors are float64 arrays of shape (m, n, p); frontal slice k is
``t[:, :, k]``. Index lists are 0-based here; the file and command-line
layers convert to 1-based.
"""

import logging
from typing import Sequence, Union

import numpy as np
from scipy import fft as sp_fft

from ..config import DFT_TOL
from ..errors import DimensionError, IndexRangeError

logger = logging.getLogger(__name__)

IndexLike = Union[Sequence[int], np.ndarray, None]


def as_tensor3(t, name: str = "tensor") -> np.ndarray:
    """Validate and return ``t`` as a finite float64 array of shape (m, n, p).

    Raises:
        DimensionError: If ``t`` is not three-dimensional or has an empty mode.
        ValueError: If ``t`` contains NaN or Inf.
    """
    arr = np.asarray(t, dtype=float)
    if arr.ndim != 3:
        raise DimensionError(f"{name} must be third-order, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise DimensionError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def unfold(t: np.ndarray) -> np.ndarray:
    """Stack the frontal slices vertically into an (m*p) x n matrix."""
    m, n, p = t.shape
    return np.ascontiguousarray(t.transpose(2, 0, 1)).reshape(m * p, n)


def fold(mat: np.ndarray, p: int) -> np.ndarray:
    """Inverse of :func:`unfold`.

    Raises:
        DimensionError: If the row count is not divisible by ``p``.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or p < 1 or mat.shape[0] % p != 0:
        raise DimensionError(f"Cannot fold a {mat.shape} matrix into {p} frontal slices")
    m = mat.shape[0] // p
    return np.ascontiguousarray(mat.reshape(p, m, mat.shape[1]).transpose(1, 2, 0))


def bcirc(t: np.ndarray) -> np.ndarray:
    """Block circulant matrix whose block (r, c) is frontal slice (r - c) mod p."""
    m, n, p = t.shape
    out = np.empty((m * p, n * p))
    for r in range(p):
        for c in range(p):
            out[r * m:(r + 1) * m, c * n:(c + 1) * n] = t[:, :, (r - c) % p]
    return out


def dft3(t: np.ndarray) -> np.ndarray:
    """Unnormalized DFT of every tube fiber (forward transform is unscaled)."""
    return sp_fft.fft(t, axis=2)


def check_conjugate_symmetry(spectral: np.ndarray) -> float:
    """Largest deviation from conj(S_k) = S_{p-k} over k = 2..p (1-based)."""
    p = spectral.shape[2]
    if p == 1 or spectral.size == 0:
        return 0.0
    mirrored = np.conj(spectral[:, :, :0:-1])
    return float(np.max(np.abs(spectral[:, :, 1:] - mirrored)))


def idft3(spectral: np.ndarray, check_real: bool = True) -> np.ndarray:
    """Inverse of :func:`dft3`, scaled by 1/p, returning the real part.

    When ``check_real`` is set the discarded imaginary residue must stay
    below ``DFT_TOL * (1 + ||result||_F)``; the error on failure reports how
    far the spectrum is from conjugate symmetry.
    """
    full = sp_fft.ifft(spectral, axis=2)
    result = np.ascontiguousarray(full.real)
    if check_real:
        residue = float(np.max(np.abs(full.imag))) if full.size else 0.0
        bound = DFT_TOL * (1.0 + float(np.linalg.norm(result)))
        if residue >= bound:
            raise ValueError(
                f"Inverse DFT left an imaginary residue of {residue:.3e} (bound {bound:.3e}); the spectrum "
                f"deviates from conjugate symmetry by {check_conjugate_symmetry(spectral):.3e}"
            )
    return result


def tprod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """t-product of an m x n x p and an n x q x p tensor, computed slice-wise in the Fourier domain.

    Raises:
        DimensionError: If the inner dimension or the tube length differ.
    """
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionError(f"Cannot t-multiply {a.shape} by {b.shape}")
    a_hat = dft3(a)
    b_hat = dft3(b)
    c_hat = np.einsum("ijk,jlk->ilk", a_hat, b_hat)
    return idft3(c_hat)


def tprod_chain(*tensors: np.ndarray) -> np.ndarray:
    """Left-to-right t-product of several tensors."""
    result = tensors[0]
    for t in tensors[1:]:
        result = tprod(result, t)
    return result


def ttranspose(t: np.ndarray) -> np.ndarray:
    """Tensor transpose: transpose slice 1 and reverse the order of slices 2..p."""
    reordered = np.concatenate([t[:, :, :1], t[:, :, :0:-1]], axis=2)
    return np.ascontiguousarray(reordered.transpose(1, 0, 2))


def identity_tensor(n: int, p: int) -> np.ndarray:
    """Identity tensor: I_n in the first frontal slice, zeros elsewhere."""
    if n < 1 or p < 1:
        raise DimensionError(f"Identity tensor needs n, p >= 1, got n={n}, p={p}")
    eye = np.zeros((n, n, p))
    eye[:, :, 0] = np.eye(n)
    return eye


def fdiag_first_slice(d: Sequence[float], p: int) -> np.ndarray:
    """f-diagonal tensor with ``diag(d)`` in the first frontal slice and zeros elsewhere."""
    d = np.asarray(d, dtype=float)
    out = np.zeros((d.size, d.size, p))
    out[:, :, 0] = np.diag(d)
    return out


def permutation_tensor(perm: Sequence[int], p: int) -> np.ndarray:
    """First-slice permutation tensor P with ``(P * A)[i] = A[perm[i]]``."""
    perm = np.asarray(perm, dtype=int)
    out = np.zeros((perm.size, perm.size, p))
    out[np.arange(perm.size), perm, 0] = 1.0
    return out


def scale_tensor(t: np.ndarray, dr: Sequence[float], dc: Sequence[float]) -> np.ndarray:
    """Compute D_r * t * D_c for first-slice-only diagonal scalings.

    Equivalent to scaling row i of every frontal slice by ``dr[i]`` and
    column j by ``dc[j]``.
    """
    dr = np.asarray(dr, dtype=float)
    dc = np.asarray(dc, dtype=float)
    if dr.size != t.shape[0] or dc.size != t.shape[1]:
        raise DimensionError(f"Scaling vectors of length {dr.size}, {dc.size} do not fit {t.shape}")
    return dr[:, None, None] * t * dc[None, :, None]


def fnorm(t: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(t.ravel()))


def specnorm(t: np.ndarray) -> float:
    """Spectral norm: the largest singular value over all Fourier-domain slices."""
    t_hat = dft3(t)
    return max(float(np.linalg.norm(t_hat[:, :, k], 2)) for k in range(t.shape[2]))


def _resolve_indices(indices: IndexLike, extent: int, mode: str) -> np.ndarray:
    if indices is None:
        return np.arange(extent)
    idx = np.asarray(indices, dtype=int).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= extent):
        raise IndexRangeError(f"{mode} indices {idx.tolist()} out of range for extent {extent}")
    return idx


def subtensor(t: np.ndarray, rows: IndexLike = None, cols: IndexLike = None) -> np.ndarray:
    """Extract t[rows, cols, :] in the listed order; ``None`` selects the whole mode.

    Raises:
        IndexRangeError: If an index lies outside the mode extent.
    """
    r = _resolve_indices(rows, t.shape[0], "horizontal")
    c = _resolve_indices(cols, t.shape[1], "lateral")
    return np.ascontiguousarray(t[np.ix_(r, c)])


def dedup_first_occurrence(indices: Sequence[int]) -> np.ndarray:
    """Remove duplicates keeping the order of first occurrence."""
    idx = np.asarray(indices, dtype=int)
    if idx.size == 0:
        return idx
    _, first = np.unique(idx, return_index=True)
    return idx[np.sort(first)]


def horizontal_slice_norms(t: np.ndarray, squared: bool = False) -> np.ndarray:
    """Frobenius norm of every horizontal slice t[i, :, :]."""
    sq = np.einsum("ijk,ijk->i", t, t)
    return sq if squared else np.sqrt(sq)


def lateral_slice_norms(t: np.ndarray, squared: bool = False) -> np.ndarray:
    """Frobenius norm of every lateral slice t[:, j, :]."""
    sq = np.einsum("ijk,ijk->j", t, t)
    return sq if squared else np.sqrt(sq)
