"""Pydantic model of a coseparable factorization A ~ P1 * A[I, J, :] * P2."""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class CosepModel(BaseModel):
    """Nonnegative factors around a coseparable core."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    P1: np.ndarray = Field(..., description="Nonnegative m x r1 x p factor")
    core: np.ndarray = Field(..., description="Core subtensor A[I, J, :], r1 x r2 x p")
    P2: np.ndarray = Field(..., description="Nonnegative r2 x n x p factor")
    I: np.ndarray = Field(..., description="0-based horizontal indices of the core")
    J: np.ndarray = Field(..., description="0-based lateral indices of the core")
    iterations: int = 0
    converged: bool = False
    objective_history: List[float] = Field(
        default_factory=list, description="||A - P1 * core * P2||_F^2 after each alternation"
    )


class CosepCertificate(BaseModel):
    """Checks that an index pair turns an exact t-CUR into a coseparable factorization."""

    exact_tcur: bool = Field(..., description="A = C * pinv(U) * R within tolerance")
    left_nonneg: bool = Field(..., description="C * pinv(U) is entrywise nonnegative within tolerance")
    right_nonneg: bool = Field(..., description="pinv(U) * R is entrywise nonnegative within tolerance")
    tcur_error: float = Field(..., description="Relative Frobenius error of the t-CUR reconstruction")

    @property
    def coseparable(self) -> bool:
        return self.exact_tcur and self.left_nonneg and self.right_nonneg
