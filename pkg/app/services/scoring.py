"""Functions to score an approximation against its source tensor."""

import numpy as np

from ..errors import DimensionError


def rel_error(a: np.ndarray, b: np.ndarray) -> float:
    """Relative Frobenius error ||a - b||_F / ||a||_F.

    Args:
        a: Reference tensor.
        b: Approximation with the same shape.

    Returns:
        The relative error.

    Raises:
        DimensionError: If the shapes differ.
        ValueError: If ``a`` is zero.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"Cannot compare tensors of shapes {a.shape} and {b.shape}")
    norm_a = float(np.linalg.norm(a.ravel()))
    if norm_a == 0.0:
        raise ValueError("Relative error is undefined for a zero reference tensor")
    return float(np.linalg.norm((a - b).ravel())) / norm_a


def rel_approx(a: np.ndarray, b: np.ndarray) -> float:
    """Relative approximation 1 - rel_error(a, b); the command line reports it in percent."""
    return 1.0 - rel_error(a, b)
