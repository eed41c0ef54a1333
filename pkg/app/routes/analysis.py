"""Health check and rank diagnostics for uploaded tensors."""

import logging

from fastapi import APIRouter, File, HTTPException, Query, UploadFile

from ..config import RANK_TOL
from ..models.linalg_result import RankReport
from ..services.tlinalg import ranks
from .factorize import read_tensor_upload

logger = logging.getLogger(__name__)

router = APIRouter()


@router.get("/health")
def health_check():
    return {"status": "ok"}


@router.post("/ranks", response_model=RankReport)
async def rank_report(
    tensor: UploadFile = File(..., description="Tensor in .t3t format"),
    rank_tol: float = Query(RANK_TOL, gt=0.0, description="Relative tolerance for nonzero singular values"),
):
    """Multirank, tubal rank and stable rank of an uploaded tensor."""
    try:
        return ranks(await read_tensor_upload(tensor), rank_tol=rank_tol)
    except ValueError as ve:
        raise HTTPException(status_code=400, detail=str(ve))
    except Exception as exc:
        logger.error(f"Rank report failed: {exc}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal error: {str(exc)}")
