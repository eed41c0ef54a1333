"""Endpoint for uploading a tensor and computing its coseparable factorization."""

import logging
import os

import numpy as np
from fastapi import APIRouter, File, HTTPException, Query, UploadFile

from ..config import (
    ALLOWED_TENSOR_EXTENSIONS,
    COSNTF_DELTA,
    COSNTF_MAXITER,
    FGM_LAMBDA,
    MAX_FILE_SIZE_MB,
    RECOVERY_DELTA,
    RECOVERY_MAXITER,
)
from ..models.analysis_result import FactorizationResult
from ..services.recovery import reconstruct, recover_factors
from ..services.scoring import rel_error
from ..services.selection import select_indices
from ..services.tproduct import as_tensor3
from ..utils.tensor_io import parse_t3t

logger = logging.getLogger(__name__)

router = APIRouter()


async def read_tensor_upload(tensor: UploadFile) -> np.ndarray:
    """Validate extension and size of an uploaded .t3t file and parse it."""
    ext = os.path.splitext(tensor.filename or "")[1].lower()
    if ext not in ALLOWED_TENSOR_EXTENSIONS:
        raise ValueError(
            f"Unsupported tensor format: {ext or 'none'}. "
            f"Supported extensions: {', '.join(ALLOWED_TENSOR_EXTENSIONS)}"
        )
    data = await tensor.read()
    size_mb = len(data) / (1024 * 1024)
    if size_mb > MAX_FILE_SIZE_MB:
        raise ValueError(f"Tensor file too large: {size_mb:.2f}MB. Maximum: {MAX_FILE_SIZE_MB}MB")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ValueError("Tensor file is not valid UTF-8 text")
    return as_tensor3(parse_t3t(text))


@router.post("/", response_model=FactorizationResult)
async def factorize(
    tensor: UploadFile = File(..., description="Nonnegative tensor in .t3t format"),
    r1: int = Query(..., ge=1, description="Number of horizontal slices in the core"),
    r2: int = Query(..., ge=1, description="Number of lateral slices in the core"),
    method: str = Query("cosntf", description="Selection method: cosntf, tcur or hybrid"),
    dist: str = Query("uniform", description="Sampling distribution for tcur: uniform, slice or leverage"),
    seed: int = Query(0, description="Seed for randomized selection"),
    delta: float = Query(COSNTF_DELTA, gt=0.0, description="Stopping threshold of CoS-NTF selection"),
    maxiter: int = Query(COSNTF_MAXITER, ge=1, description="Alternation cap of CoS-NTF selection"),
    lam: float = Query(FGM_LAMBDA, ge=0.0, description="Trace regularization weight"),
):
    """Select a coseparable core of the uploaded tensor, recover its factors and score the fit."""
    try:
        data = await read_tensor_upload(tensor)
        logger.info(f"Factorizing {data.shape} tensor with {method} (r1={r1}, r2={r2})")
        selection = select_indices(
            data, method, r1, r2, seed=seed, dist=dist, delta=delta, maxiter=maxiter, lam=lam
        )
        model = recover_factors(data, selection.I, selection.J, maxiter=RECOVERY_MAXITER, delta=RECOVERY_DELTA)
        error = rel_error(data, reconstruct(model))
        result = FactorizationResult(
            method=selection.method,
            shape=list(data.shape),
            I=(selection.I + 1).tolist(),
            J=(selection.J + 1).tolist(),
            rel_error=error,
            rel_approx_percent=100.0 * (1.0 - error),
            selection_iterations=selection.outer_iterations,
            recovery_iterations=model.iterations,
            converged=model.converged,
        )
        logger.info(f"Factorization complete: rel_error={error:.3e}")
        return result

    except ValueError as ve:
        # User input errors
        raise HTTPException(status_code=400, detail=str(ve))
    except Exception as exc:
        logger.error(f"Factorization failed: {exc}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal error: {str(exc)}")
