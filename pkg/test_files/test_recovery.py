import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.errors import DimensionError
from app.models.cosep_model import CosepModel
from app.models.experiment import SynthSpec
from app.services import recovery
from app.services.recovery import _solve_right, coseparability_certificate, nnls_cd, reconstruct, recover_factors
from app.services.sampling import tcur_reconstruct
from app.services.scoring import rel_approx, rel_error
from app.services.synthetic import gen_synthetic
from app.services.tproduct import identity_tensor, scale_tensor, subtensor, tprod_chain


def test_nnls_identity_system_clips_in_one_sweep(rng):
    b = rng.standard_normal((4, 3))
    assert_allclose(nnls_cd(b, np.eye(4), inner_iter=1), np.maximum(b, 0.0))
    assert np.all(nnls_cd(-np.abs(b), np.eye(4)) == 0.0)


def test_nnls_recovers_planted_solution(rng):
    q = rng.standard_normal((20, 4))
    x_true = np.maximum(rng.standard_normal((4, 3)), 0.0)
    b = q @ x_true
    x = nnls_cd(b, q, inner_iter=5000, tol=0.0)
    assert np.all(x >= 0)
    assert np.linalg.norm(b - q @ x) <= 1e-8 * np.linalg.norm(b)


def test_nnls_warm_start_does_not_increase_residual(rng):
    q = rng.random((10, 3))
    b = rng.random((10, 2))
    x0 = rng.random((3, 2))
    x = nnls_cd(b, q, x0=x0, inner_iter=3)
    assert np.linalg.norm(b - q @ x) <= np.linalg.norm(b - q @ x0) + 1e-12


def test_nnls_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        nnls_cd(np.zeros((3, 2)), np.zeros((4, 2)))


def test_printed_factors_reproduce_first_example(example_one):
    e = example_one
    assert_allclose(tprod_chain(e["P1"], e["core"], e["P2"]), e["A"], atol=1e-10)
    assert_allclose(subtensor(e["A"], [0, 1], [0, 1]), e["core"])


@pytest.mark.parametrize("cols", [[0, 1], [0, 2]])
def test_second_example_has_exact_tcur(example_two, cols):
    a = example_two
    approx = tcur_reconstruct(subtensor(a, cols=cols), subtensor(a, [0, 1], cols), subtensor(a, rows=[0, 1]))
    assert_allclose(approx, a, atol=1e-10)


def test_second_example_factors(example_two):
    model = recover_factors(example_two, [0, 1], [0, 1])
    assert rel_error(example_two, reconstruct(model)) <= 1e-6
    assert np.all(model.P1 >= 0) and np.all(model.P2 >= 0)


def test_first_example_factors(example_one):
    a = example_one["A"]
    model = recover_factors(a, [0, 1], [0, 1])
    assert rel_error(a, reconstruct(model)) <= 1e-6


def test_ground_truth_indices_recover_generator(small_coseparable):
    data = small_coseparable
    model = recover_factors(data.tensor, data.I, data.J)
    assert rel_error(data.tensor, reconstruct(model)) <= 1e-6
    assert_allclose(subtensor(model.P2, cols=data.J), identity_tensor(2, 3), atol=1e-3)
    history = model.objective_history
    assert all(b <= a * (1 + 1e-9) + 1e-12 for a, b in zip(history, history[1:]))


def test_noisy_recovery_objective_never_rises(caplog):
    data = gen_synthetic(SynthSpec(m=12, n=10, p=3, r1=3, r2=2, noise_level=0.05, seed=2))
    with caplog.at_level(logging.WARNING, logger="app.services.recovery"):
        model = recover_factors(data.tensor, data.I, data.J, maxiter=30)
    history = model.objective_history
    assert len(history) >= 2 and history[-1] > 0.0
    assert all(b <= a * (1 + 1e-9) + 1e-14 for a, b in zip(history, history[1:]))
    assert "objective rose" not in caplog.text


def test_rising_objective_is_reported(small_coseparable, monkeypatch, caplog):
    calls = []

    def inflated_solve(target, left, x0):
        calls.append(1)
        solution = _solve_right(target, left, x0)
        return 3.0 * solution if len(calls) >= 5 else solution

    monkeypatch.setattr(recovery, "_solve_right", inflated_solve)
    data = small_coseparable
    with caplog.at_level(logging.WARNING, logger="app.services.recovery"):
        model = recover_factors(data.tensor, data.I, data.J, maxiter=3, delta=0.0)
    assert model.objective_history[1] > model.objective_history[0]
    assert "objective rose" in caplog.text


def test_all_indices_give_identity_factors(rng):
    t = rng.random((4, 3, 2)) + 0.1
    model = recover_factors(t, [0, 1, 2, 3], [0, 1, 2])
    assert rel_error(t, reconstruct(model)) <= 1e-6
    assert np.all(model.P1 >= 0) and np.all(model.P2 >= 0)


def test_scaling_preserves_recoverability(small_coseparable):
    data = small_coseparable
    rng = np.random.default_rng(4)
    scaled = scale_tensor(data.tensor, rng.random(12) + 0.5, rng.random(10) + 0.5)
    model = recover_factors(scaled, data.I, data.J)
    assert rel_error(scaled, reconstruct(model)) <= 1e-6


def test_recovery_rejects_negative_tensor(example_one):
    with pytest.raises(ValueError):
        recover_factors(-example_one["A"], [0], [0])


def test_reconstruct_trivial_models(rng):
    t = rng.random((3, 2, 2))
    identity_model = CosepModel(
        P1=identity_tensor(3, 2), core=t, P2=identity_tensor(2, 2), I=np.arange(3), J=np.arange(2)
    )
    assert_allclose(reconstruct(identity_model), t, atol=1e-12)
    zero_model = identity_model.model_copy(update={"P1": np.zeros((3, 3, 2))})
    assert np.all(reconstruct(zero_model) == 0.0)


def test_certificate_on_square_core(rng):
    core = rng.random((2, 2, 3)) + 2.0 * identity_tensor(2, 3)
    p1 = np.concatenate([identity_tensor(2, 3), rng.random((4, 2, 3))], axis=0)
    p2 = np.concatenate([identity_tensor(2, 3), rng.random((2, 3, 3))], axis=1)
    a = tprod_chain(p1, core, p2)
    cert = coseparability_certificate(a, [0, 1], [0, 1])
    assert cert.exact_tcur and cert.left_nonneg and cert.right_nonneg
    assert cert.coseparable


def test_rel_error_and_approx(rng):
    a = rng.random((3, 2, 2))
    assert rel_error(a, a) == 0.0 and rel_approx(a, a) == 1.0
    assert rel_error(a, np.zeros_like(a)) == pytest.approx(1.0)
    assert rel_approx(a, np.zeros_like(a)) == pytest.approx(0.0)
    assert rel_error(a, 2 * a) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rel_error(np.zeros((2, 2, 2)), a[:2, :2])
    with pytest.raises(DimensionError):
        rel_error(a, a[:2])
