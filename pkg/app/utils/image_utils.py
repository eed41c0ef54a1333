"""Image directory ingestion: grayscale PGM files stacked into a tensor."""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..config import ALLOWED_IMAGE_EXTENSIONS

logger = logging.getLogger(__name__)


def load_grayscale(path: Union[str, Path]) -> np.ndarray:
    """Read a grayscale image scaled to [0, 1] by its bit depth."""
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            pixels = np.asarray(img, dtype=float)
    except (OSError, UnidentifiedImageError) as e:
        raise ValueError(f"Cannot read image {path}: {str(e)}")
    if pixels.ndim != 2:
        raise ValueError(f"Image {path} is not grayscale (mode {mode})")
    scale = 255.0 if mode in ("L", "P", "1") else 65535.0
    return pixels / scale


def resize_bilinear(pixels: np.ndarray, size: Tuple[int, int]) -> np.ndarray:
    """Resize to (height, width) with bilinear interpolation in 32-bit float mode."""
    height, width = size
    img = Image.fromarray(pixels.astype(np.float32))
    return np.asarray(img.resize((width, height), Image.BILINEAR), dtype=float)


def ingest_images(directory: Union[str, Path], resize: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Stack the images of a directory as lateral slices.

    Files are taken in name order; image i becomes lateral slice i, so the
    tensor is height x count x width.

    Args:
        directory: Folder containing .pgm files (plain or binary).
        resize: Optional (height, width) target.

    Returns:
        Tensor with entries in [0, 1].

    Raises:
        ValueError: If the folder has no images, a file is unreadable or the
            original sizes differ.
    """
    folder = Path(directory)
    if not folder.is_dir():
        raise ValueError(f"Not a directory: {directory}")
    files = sorted(f for f in folder.iterdir() if f.suffix.lower() in ALLOWED_IMAGE_EXTENSIONS)
    if not files:
        raise ValueError(f"No images with extensions {', '.join(ALLOWED_IMAGE_EXTENSIONS)} in {directory}")

    images = []
    for f in files:
        pixels = load_grayscale(f)
        if images and pixels.shape != images[0].shape:
            raise ValueError(f"Image {f.name} is {pixels.shape}, expected {images[0].shape}")
        images.append(pixels)

    if resize is not None:
        images = [np.clip(resize_bilinear(img, resize), 0.0, 1.0) for img in images]
    tensor = np.stack(images, axis=1)
    logger.info(f"Ingested {len(images)} images from {directory} into a {tensor.shape} tensor")
    return tensor
