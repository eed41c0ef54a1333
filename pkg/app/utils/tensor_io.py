"""Reading and writing .t3t tensor files and .idx index files.

A .t3t file starts with ``t3 m n p`` followed by m*n*p values in
slice-major, row-major order (frontal slice 1 row by row, then slice 2).
An .idx file has two lines ``I: i1,i2,...`` and ``J: j1,...`` with
1-based indices.
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import TensorFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_t3t(t: np.ndarray) -> str:
    t = np.asarray(t, dtype=float)
    if t.ndim != 3:
        raise TensorFormatError(f"Only third-order tensors can be written, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise TensorFormatError("Tensor contains non-finite values")
    m, n, p = t.shape
    values = t.transpose(2, 0, 1).reshape(p * m, n)
    lines = [f"t3 {m} {n} {p}"]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in values)
    return "\n".join(lines) + "\n"


def parse_t3t(text: str) -> np.ndarray:
    """Parse the contents of a .t3t file.

    Raises:
        TensorFormatError: On a malformed header, a count mismatch or non-finite values.
    """
    tokens = text.split()
    if len(tokens) < 4 or tokens[0] != "t3":
        raise TensorFormatError("Missing 't3 m n p' header")
    try:
        m, n, p = (int(tok) for tok in tokens[1:4])
    except ValueError:
        raise TensorFormatError(f"Non-integer dimensions in header: {' '.join(tokens[:4])}")
    if min(m, n, p) < 1:
        raise TensorFormatError(f"Dimensions must be positive, got {m} {n} {p}")
    body = tokens[4:]
    if len(body) != m * n * p:
        raise TensorFormatError(f"Expected {m * n * p} values for {m}x{n}x{p}, found {len(body)}")
    try:
        values = np.array([float(tok) for tok in body])
    except ValueError as e:
        raise TensorFormatError(f"Unreadable value: {str(e)}")
    if not np.all(np.isfinite(values)):
        raise TensorFormatError("Tensor file contains non-finite values")
    return np.ascontiguousarray(values.reshape(p, m, n).transpose(1, 2, 0))


def write_t3t(path: PathLike, t: np.ndarray) -> None:
    Path(path).write_text(format_t3t(t))
    logger.debug(f"Wrote tensor {np.shape(t)} to {path}")


def read_t3t(path: PathLike) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise TensorFormatError(f"Cannot read tensor file {path}: {str(e)}")
    return parse_t3t(text)


def format_idx(rows: np.ndarray, cols: np.ndarray) -> str:
    """Render 0-based index arrays as 1-based .idx text."""
    row_text = ",".join(str(int(i) + 1) for i in rows)
    col_text = ",".join(str(int(j) + 1) for j in cols)
    return f"I: {row_text}\nJ: {col_text}\n"


def parse_idx(text: str) -> Tuple[np.ndarray, np.ndarray]:
    """Parse .idx text into 0-based index arrays, order preserved."""
    found = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("I", "J"):
            raise TensorFormatError(f"Malformed index line: {line!r}")
        try:
            values = [int(tok) for tok in rest.replace(",", " ").split()]
        except ValueError:
            raise TensorFormatError(f"Non-integer index in line: {line!r}")
        if any(v < 1 for v in values):
            raise TensorFormatError(f"Indices are 1-based, got {line!r}")
        found[key] = np.asarray(values, dtype=int) - 1
    if set(found) != {"I", "J"}:
        raise TensorFormatError("Index file needs both an 'I:' and a 'J:' line")
    return found["I"], found["J"]


def write_idx(path: PathLike, rows: np.ndarray, cols: np.ndarray) -> None:
    Path(path).write_text(format_idx(rows, cols))


def read_idx(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise TensorFormatError(f"Cannot read index file {path}: {str(e)}")
    return parse_idx(text)
