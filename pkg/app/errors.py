"""Exception types raised by the factorization services.

Input problems derive from ``ValueError`` so callers (the HTTP routes and
the command line) can treat them as user errors.
"""

from typing import Optional


class DimensionError(ValueError):
    """Operands have incompatible or invalid dimensions."""


class IndexRangeError(ValueError):
    """An index list refers outside the extent of its mode."""


class TensorFormatError(ValueError):
    """A tensor or index file is malformed."""


class SamplingError(ValueError):
    """Randomized sampling could not produce enough distinct indices."""


class SingularSliceError(ValueError):
    """A Fourier-domain frontal slice is numerically singular."""

    def __init__(self, slice_index: int, sigma_min: float):
        self.slice_index = slice_index  # 1-based
        self.sigma_min = sigma_min
        super().__init__(
            f"Spectral slice {slice_index} is singular (smallest singular value {sigma_min:.3e})"
        )


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration cap."""

    def __init__(self, message: str, residual: Optional[float] = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (best residual {residual:.3e})"
        super().__init__(message)
