"""FastAPI application serving coseparable factorizations of uploaded tensors."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from .config import (
    API_DESCRIPTION,
    API_TITLE,
    API_VERSION,
    COSNTF_MAXITER,
    FGM_LAMBDA,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVEL,
    MAX_FILE_SIZE_MB,
    SVD_BACKEND,
)
from .routes.analysis import router as analysis_router
from .routes.factorize import router as factorize_router

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format=LOG_FORMAT,
    datefmt=LOG_DATE_FORMAT,
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(_: FastAPI):
    logger.info(
        f"Serving with SVD backend '{SVD_BACKEND}', lambda={FGM_LAMBDA}, "
        f"maxiter={COSNTF_MAXITER}, uploads up to {MAX_FILE_SIZE_MB}MB"
    )
    yield
    logger.info("Application shutdown")


def create_app() -> FastAPI:
    """Build the API with the factorization and analysis routers mounted."""
    api = FastAPI(title=API_TITLE, description=API_DESCRIPTION, version=API_VERSION, lifespan=lifespan)
    api.include_router(factorize_router, prefix="/factorize", tags=["factorize"])
    api.include_router(analysis_router, prefix="/analysis", tags=["analysis"])

    @api.get("/")
    def read_root():
        """List the available endpoints."""
        return {
            "message": f"{API_TITLE} {API_VERSION}",
            "endpoints": {
                "factorize": "/factorize/",
                "ranks": "/analysis/ranks",
                "health": "/analysis/health",
                "docs": "/docs",
            },
        }

    return api


app = create_app()
