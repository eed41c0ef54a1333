import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from pydantic import ValidationError

from app.errors import ConvergenceError
from app.models.experiment import SynthSpec
from app.services.recovery import reconstruct, recover_factors
from app.services.scoring import rel_error
from app.services.synthetic import coseparable_block, gen_synthetic, sinkhorn
from app.services.tproduct import fnorm, subtensor


def test_slice_sums_hit_target():
    data = gen_synthetic(SynthSpec(m=100, n=100, p=10, r1=10, r2=3, seed=0))
    assert_allclose(data.tensor.sum(axis=(1, 2)), 100.0, atol=1e-6)
    assert_allclose(data.tensor.sum(axis=(0, 2)), 100.0, atol=1e-6)
    assert data.tensor.min() >= 0.0


def test_rectangular_sums_balance_totals():
    data = gen_synthetic(SynthSpec(m=20, n=10, p=3, r1=4, r2=2, seed=2))
    assert_allclose(data.tensor.sum(axis=(1, 2)), 100.0, atol=1e-6)
    assert_allclose(data.tensor.sum(axis=(0, 2)), 200.0, atol=1e-6)


def test_generation_is_bit_reproducible():
    spec = SynthSpec(m=15, n=12, p=3, r1=3, r2=2, noise_level=1e-3, seed=9)
    first, second = gen_synthetic(spec), gen_synthetic(spec)
    assert_array_equal(first.tensor, second.tensor)
    assert_array_equal(first.I, second.I)
    assert not np.array_equal(first.tensor, gen_synthetic(spec.model_copy(update={"seed": 10})).tensor)


def test_noise_level_is_relative():
    spec = SynthSpec(m=20, n=20, p=3, r1=3, r2=2, noise_level=1e-4, seed=1)
    data = gen_synthetic(spec)
    ratio = fnorm(data.tensor - data.noiseless) / fnorm(data.noiseless)
    # Clipping at zero only shrinks the perturbation.
    assert 0.5e-4 < ratio <= 1e-4 * (1 + 1e-8)


def test_noiseless_tensor_is_coseparable_on_ground_truth(small_coseparable):
    data = small_coseparable
    assert_array_equal(data.tensor, data.noiseless)
    model = recover_factors(data.tensor, data.I, data.J)
    assert rel_error(data.tensor, reconstruct(model)) <= 1e-6


def test_ground_truth_follows_the_permutation():
    data = gen_synthetic(SynthSpec(m=8, n=6, p=2, r1=2, r2=2, seed=3))
    core = subtensor(data.tensor, data.I, data.J)
    assert core.shape == (2, 2, 2)
    assert len(set(data.I.tolist())) == 2 and len(set(data.J.tolist())) == 2


def test_block_layout(rng):
    s = rng.random((2, 2, 2))
    block = coseparable_block(s, rng.random((3, 2, 2)), rng.random((2, 4, 2)))
    assert block.shape == (5, 6, 2)
    assert_array_equal(block[:2, :2], s)


def test_sinkhorn_balances_and_reports_failure(rng):
    mat = rng.random((5, 4)) + 0.1
    dr, dc = sinkhorn(mat, 4.0, 5.0)
    scaled = dr[:, None] * mat * dc[None, :]
    assert_allclose(scaled.sum(axis=1), 4.0, rtol=1e-8)
    assert_allclose(scaled.sum(axis=0), 5.0, rtol=1e-8)
    with pytest.raises(ConvergenceError):
        sinkhorn(mat, 4.0, 5.0, max_rounds=1, tol=1e-15)
    with pytest.raises(ValueError):
        sinkhorn(mat, 1.0, 1.0)


def test_spec_validation():
    with pytest.raises(ValidationError):
        SynthSpec(m=5, n=5, r1=6, r2=2)
    with pytest.raises(ValidationError):
        SynthSpec(noise_level=-1.0)
