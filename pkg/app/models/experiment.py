"""Pydantic models for synthetic data and experiment records."""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SynthSpec(BaseModel):
    """Parameters of a noisy coseparable synthetic tensor."""

    m: int = Field(100, ge=1)
    n: int = Field(100, ge=1)
    p: int = Field(10, ge=1)
    r1: int = Field(10, ge=1)
    r2: int = Field(3, ge=1)
    noise_level: float = Field(0.0, ge=0.0, description="||N||_F / ||A_scale||_F")
    slice_sum: float = Field(100.0, gt=0.0, description="Target sum of every horizontal slice")
    seed: int = 0

    @model_validator(mode="after")
    def _check_ranks(self) -> "SynthSpec":
        if self.r1 > self.m or self.r2 > self.n:
            raise ValueError(f"Need r1 <= m and r2 <= n, got ({self.r1}, {self.r2}) for ({self.m}, {self.n})")
        return self


class SyntheticTensor(BaseModel):
    """A generated tensor with its ground truth."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tensor: np.ndarray
    noiseless: np.ndarray
    I: np.ndarray = Field(..., description="0-based generating horizontal indices, core order")
    J: np.ndarray = Field(..., description="0-based generating lateral indices, core order")
    spec: SynthSpec


class ExperimentRecord(BaseModel):
    """One trial of the noise sweep."""

    method: str
    r1: int
    r2: int
    seed: int
    noise: float
    rel_error: float
    rel_approx: float
    wall_ms: float = 0.0
    I: List[int] = Field(default_factory=list, description="1-based selected horizontal indices")
    J: List[int] = Field(default_factory=list, description="1-based selected lateral indices")
    error: Optional[str] = None
