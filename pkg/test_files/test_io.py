import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from PIL import Image

from app.errors import TensorFormatError
from app.utils.image_utils import ingest_images, load_grayscale
from app.utils.tensor_io import format_t3t, parse_idx, parse_t3t, read_idx, read_t3t, write_idx, write_t3t


def test_t3t_round_trip_is_bit_exact(tmp_path, rng):
    t = rng.standard_normal((4, 3, 2)) * 1e3
    path = tmp_path / "a.t3t"
    write_t3t(path, t)
    assert_array_equal(read_t3t(path), t)


def test_t3t_storage_order():
    t = np.arange(8, dtype=float).reshape(2, 2, 2)
    lines = format_t3t(t).splitlines()
    assert lines[0] == "t3 2 2 2"
    assert lines[1:3] == ["0 2", "4 6"]


@pytest.mark.parametrize(
    "text",
    ["t3 0 1 1\n", "t2 1 1 1\n1\n", "t3 1 1 2\n1\n", "t3 1 1 1\nnan\n", "t3 a 1 1\n1\n", "t3 1 1 1\nx\n", ""],
)
def test_t3t_rejects_malformed(text):
    with pytest.raises(TensorFormatError):
        parse_t3t(text)


def test_idx_round_trip_preserves_order(tmp_path):
    path = tmp_path / "core.idx"
    write_idx(path, np.array([4, 0, 2]), np.array([1]))
    assert path.read_text() == "I: 5,1,3\nJ: 2\n"
    rows, cols = read_idx(path)
    assert_array_equal(rows, [4, 0, 2])
    assert_array_equal(cols, [1])


@pytest.mark.parametrize("text", ["I: 1,2\n", "I: 0\nJ: 1\n", "I: 1\nK: 1\n", "I: a\nJ: 1\n"])
def test_idx_rejects_malformed(text):
    with pytest.raises(TensorFormatError):
        parse_idx(text)


def test_missing_file_is_a_format_error(tmp_path):
    with pytest.raises(TensorFormatError):
        read_t3t(tmp_path / "missing.t3t")


def save_pgm(path, pixels):
    Image.fromarray(np.asarray(pixels, dtype=np.uint8)).save(path)


def test_single_image_layout(tmp_path):
    save_pgm(tmp_path / "a.pgm", [[0, 51], [102, 255]])
    t = ingest_images(tmp_path)
    assert t.shape == (2, 1, 2)
    assert_allclose(t[:, 0, :], np.array([[0, 51], [102, 255]]) / 255.0)


def test_plain_pgm_is_read(tmp_path):
    (tmp_path / "plain.pgm").write_text("P2\n# plain\n2 2\n255\n0 51\n102 255\n")
    assert_allclose(load_grayscale(tmp_path / "plain.pgm"), [[0.0, 0.2], [0.4, 1.0]])
    t = ingest_images(tmp_path)
    assert t.shape == (2, 1, 2)
    assert_allclose(t[:, 0, :], [[0.0, 0.2], [0.4, 1.0]])


def test_sixteen_bit_pgm_is_scaled_by_its_maxval(tmp_path):
    (tmp_path / "deep.pgm").write_text("P2\n2 1\n1000\n0 1000\n")
    assert_allclose(load_grayscale(tmp_path / "deep.pgm"), [[0.0, 1.0]])
    (tmp_path / "binary.pgm").write_bytes(b"P5\n2 1\n1000\n" + np.array([500, 1000], dtype=">u2").tobytes())
    assert_allclose(load_grayscale(tmp_path / "binary.pgm"), [[0.5, 1.0]], atol=1e-4)


def test_identical_images_give_equal_lateral_slices(tmp_path, rng):
    pixels = rng.integers(0, 256, size=(4, 5))
    for i in range(3):
        save_pgm(tmp_path / f"img{i}.pgm", pixels)
    t = ingest_images(tmp_path)
    assert t.shape == (4, 3, 5)
    assert_array_equal(t[:, 0, :], t[:, 2, :])


def test_resize_of_constant_image_is_constant(tmp_path):
    save_pgm(tmp_path / "c.pgm", np.full((8, 6), 128))
    t = ingest_images(tmp_path, resize=(4, 3))
    assert t.shape == (4, 1, 3)
    assert_allclose(t, 128 / 255.0, atol=1e-6)


def test_mixed_sizes_and_bad_files_are_rejected(tmp_path):
    save_pgm(tmp_path / "a.pgm", np.zeros((2, 2)))
    save_pgm(tmp_path / "b.pgm", np.zeros((3, 2)))
    with pytest.raises(ValueError):
        ingest_images(tmp_path)
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "x.pgm").write_bytes(b"not an image")
    with pytest.raises(ValueError):
        ingest_images(bad)
    with pytest.raises(ValueError):
        ingest_images(tmp_path / "nothing")
