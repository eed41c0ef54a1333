"""Pydantic models for randomized slice sampling."""

from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class SamplingDistribution(BaseModel):
    """Probability vector over the horizontal or lateral slices of a tensor."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["uniform", "slice", "leverage"]
    mode: Literal["horizontal", "lateral"]
    weights: np.ndarray = Field(..., description="Nonnegative weights summing to one")
    r: Optional[int] = Field(None, description="Target tubal rank for leverage scores")


class TcurResult(BaseModel):
    """Sampled t-CUR factors C = A[:, J, :], U = A[I, J, :], R = A[I, :, :]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    C: np.ndarray
    U: np.ndarray
    R: np.ndarray
    I: np.ndarray = Field(..., description="0-based horizontal indices, first-occurrence order")
    J: np.ndarray = Field(..., description="0-based lateral indices, first-occurrence order")
    rounds: int = Field(1, description="Sampling rounds needed to reach the requested unique counts")


class DeimResult(BaseModel):
    """Output of t-DEIM index selection."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    indices: np.ndarray = Field(..., description="0-based selected horizontal indices, in selection order")
    pinv_steps: List[int] = Field(
        default_factory=list,
        description="Steps (1-based) where the running subtensor was singular and t-pinv was used",
    )
    chosen_residuals: List[float] = Field(
        default_factory=list,
        description="Largest residual tube norm at the already chosen indices, for steps 2..n",
    )
