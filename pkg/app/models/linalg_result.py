"""Pydantic models for t-SVD factors and rank diagnostics."""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class TsvdFactors(BaseModel):
    """Factors of A = W * Sigma * V^T."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    W: np.ndarray = Field(..., description="Orthogonal m x m x p tensor")
    Sigma: np.ndarray = Field(..., description="f-diagonal m x n x p tensor")
    V: np.ndarray = Field(..., description="Orthogonal n x n x p tensor")
    spectral_sigma: np.ndarray = Field(
        ..., description="Singular values of every Fourier-domain slice, shape min(m, n) x p"
    )


class RankReport(BaseModel):
    """Rank notions of a third-order tensor."""

    multirank: List[int] = Field(..., description="Rank of each Fourier-domain frontal slice")
    tubalrank: int = Field(..., description="Number of nonzero singular tubes")
    stable_rank: float = Field(..., description="||A||_F^2 / ||A||_2^2")
    rank_tol: float = Field(..., description="Relative tolerance used to call a singular value nonzero")
