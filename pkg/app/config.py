"""Configuration settings for the coseparable tensor factorization toolkit."""

import os
from typing import List
from pathlib import Path

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv
    # Load .env file from the project root (parent of app directory)
    env_path = Path(__file__).parent.parent / ".env"
    if env_path.exists():
        load_dotenv(dotenv_path=env_path)
except ImportError:
    # python-dotenv not installed, skip .env loading
    pass

# t-product settings
DFT_TOL: float = float(os.getenv("DFT_TOL", "1e-10"))  # imaginary residue allowed after idft3

# Singular value decomposition settings
SVD_BACKEND: str = os.getenv("SVD_BACKEND", "jacobi").lower()  # "jacobi" or "lapack"
JACOBI_MAX_SWEEPS: int = int(os.getenv("JACOBI_MAX_SWEEPS", "60"))
JACOBI_TOL: float = float(os.getenv("JACOBI_TOL", "1e-14"))
RANK_TOL: float = float(os.getenv("RANK_TOL", "1e-10"))  # relative to sigma_max of the spectral slices

# Fast gradient (self-dictionary) settings
FGM_LAMBDA: float = float(os.getenv("FGM_LAMBDA", "0.25"))
FGM_MAX_ITER: int = int(os.getenv("FGM_MAX_ITER", "500"))
FGM_POWER_ITER: int = int(os.getenv("FGM_POWER_ITER", "30"))
FGM_TOL: float = float(os.getenv("FGM_TOL", "1e-9"))  # relative step length that ends a solve

# Alternating CoS-NTF selection settings
COSNTF_DELTA: float = float(os.getenv("COSNTF_DELTA", "1e-6"))  # synthetic profile
COSNTF_DELTA_REAL: float = float(os.getenv("COSNTF_DELTA_REAL", "1e-2"))  # image data profile
COSNTF_MAXITER: int = int(os.getenv("COSNTF_MAXITER", "50"))

# Factor recovery settings
RECOVERY_MAXITER: int = int(os.getenv("RECOVERY_MAXITER", "100"))
RECOVERY_DELTA: float = float(os.getenv("RECOVERY_DELTA", "1e-6"))
NNLS_INNER_ITER: int = int(os.getenv("NNLS_INNER_ITER", "200"))
NNLS_TOL: float = float(os.getenv("NNLS_TOL", "1e-10"))

# Randomized sampling settings
TCUR_MAX_ROUNDS: int = int(os.getenv("TCUR_MAX_ROUNDS", "10"))
SAMPLING_DISTRIBUTIONS: List[str] = ["uniform", "slice", "leverage"]

# Synthetic data settings
SLICE_SUM_TARGET: float = float(os.getenv("SLICE_SUM_TARGET", "100.0"))
SINKHORN_MAX_ROUNDS: int = int(os.getenv("SINKHORN_MAX_ROUNDS", "500"))
SINKHORN_TOL: float = float(os.getenv("SINKHORN_TOL", "1e-8"))  # relative slice-sum deviation

# Experiment sweep settings
NOISE_LEVELS: List[float] = [
    float(level) for level in os.getenv("NOISE_LEVELS", "1e-7,1e-6,1e-5,1e-4,1e-3,1e-2,1e-1").split(",")
]
SWEEP_TRIALS: int = int(os.getenv("SWEEP_TRIALS", "10"))
SWEEP_METHODS: List[str] = ["cosntf", "tcur-uniform", "tcur-slice", "tcur-leverage", "hybrid"]
CSV_COLUMNS: List[str] = ["method", "r1", "r2", "seed", "noise", "rel_error", "rel_approx", "wall_ms"]

# File settings
MAX_FILE_SIZE_MB: int = int(os.getenv("MAX_FILE_SIZE_MB", "50"))
ALLOWED_TENSOR_EXTENSIONS: List[str] = [".t3t"]
ALLOWED_IMAGE_EXTENSIONS: List[str] = [".pgm"]

# API settings
API_TITLE: str = "Coseparable NTF API"
API_VERSION: str = "1.0.0"
API_DESCRIPTION: str = "Coseparable nonnegative tensor factorization under the t-product."

# Logging settings
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT: str = "%Y-%m-%d %H:%M:%S"
