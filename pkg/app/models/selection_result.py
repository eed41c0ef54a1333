"""Pydantic models for index selection."""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class FgmProblem(BaseModel):
    """Self-dictionary model min 1/2 ||M - M Y||_F^2 + lambda tr(Y) over the weighted set Omega."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    M: np.ndarray = Field(..., description="Nonnegative data matrix")
    r: int = Field(..., ge=1, description="Number of columns to select")
    lam: float = Field(0.25, ge=0.0, description="Trace regularization weight")
    max_iter: int = Field(500, ge=1)
    restart: bool = Field(True, description="Restart the momentum when the objective increases")

    @property
    def weights(self) -> np.ndarray:
        """Column l1 norms."""
        return np.abs(self.M).sum(axis=0)


class FgmResult(BaseModel):
    """Solution of an FgmProblem."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    Y: np.ndarray
    diag: np.ndarray
    objective: float
    iterations: int
    checkpoints: List[float] = Field(
        default_factory=list, description="Objective at the start and at every momentum restart"
    )


class SelectionResult(BaseModel):
    """Horizontal and lateral indices of a coseparable core."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    I: np.ndarray = Field(..., description="0-based horizontal indices")
    J: np.ndarray = Field(..., description="0-based lateral indices")
    method: str = ""
    outer_iterations: int = 0
    converged: bool = True
    history: List[float] = Field(default_factory=list, description="Stopping criterion per outer step")
