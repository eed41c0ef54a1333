"""Pydantic model representing the result of a factorization request."""

from pydantic import BaseModel, Field
from typing import List


class FactorizationResult(BaseModel):
    """Response model for a factorization request."""

    method: str = Field(..., description="Selection method used")
    shape: List[int] = Field(..., description="Dimensions (m, n, p) of the uploaded tensor")
    I: List[int] = Field(..., description="1-based horizontal indices of the coseparable core")
    J: List[int] = Field(..., description="1-based lateral indices of the coseparable core")
    rel_error: float = Field(..., description="||A - P1 * core * P2||_F / ||A||_F")
    rel_approx_percent: float = Field(..., description="Relative approximation in percent")
    selection_iterations: int = Field(..., description="Outer iterations of the selector")
    recovery_iterations: int = Field(..., description="Alternations of the factor recovery")
    converged: bool = Field(..., description="Whether factor recovery met its stopping criterion")
