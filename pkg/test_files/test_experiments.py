import math

import pandas as pd
import pytest

from app.config import CSV_COLUMNS
from app.models.experiment import ExperimentRecord, SynthSpec
from app.services.experiments import run_trial, summarize, sweep, write_csv
from app.services.synthetic import gen_synthetic

BASE = SynthSpec(m=12, n=10, p=3, r1=3, r2=2, seed=11)


def record(method, seed, noise, error):
    return ExperimentRecord(
        method=method, r1=3, r2=2, seed=seed, noise=noise, rel_error=error, rel_approx=1.0 - error
    )


def test_summary_appends_mean_rows_per_level():
    records = [
        record("cosntf", 0, 0.0, 0.1),
        record("hybrid", 0, 0.0, 0.4),
        record("cosntf", 1, 0.0, 0.3),
        record("hybrid", 1, 0.0, 0.2),
        record("cosntf", 0, 0.01, 0.5),
        record("hybrid", 0, 0.01, 0.7),
    ]
    frame = summarize(records)
    assert list(frame.columns) == CSV_COLUMNS
    means = frame[frame["seed"] == "mean"]
    assert means["method"].tolist() == ["cosntf", "hybrid", "cosntf", "hybrid"]
    assert means["rel_error"].tolist() == pytest.approx([0.2, 0.3, 0.5, 0.7])
    # Trial rows of a level come before its means.
    assert frame.iloc[4]["seed"] == "mean" and frame.iloc[5]["seed"] == "mean"


def test_failed_trial_makes_its_mean_nan():
    records = [
        record("cosntf", 0, 0.0, 0.1),
        record("cosntf", 1, 0.0, float("nan")),
        record("hybrid", 0, 0.0, 0.4),
        record("hybrid", 1, 0.0, 0.2),
    ]
    frame = summarize(records)
    means = frame[frame["seed"] == "mean"].set_index("method")
    assert math.isnan(means.loc["cosntf", "rel_error"])
    assert math.isnan(means.loc["cosntf", "rel_approx"])
    assert means.loc["hybrid", "rel_error"] == pytest.approx(0.3)
    trials = frame[frame["seed"] != "mean"]
    assert trials["rel_error"].isna().sum() == 1


def test_summary_of_nothing_is_empty():
    assert summarize([]).empty


def test_failed_trial_is_recorded_not_raised(rng):
    tensor = rng.random((4, 3, 2))
    result = run_trial(tensor, "no-such-method", 2, 2, seed=0, noise=0.0)
    assert math.isnan(result.rel_error)
    assert result.error


def test_noiseless_trial_is_exact():
    data = gen_synthetic(BASE)
    result = run_trial(data.tensor, "cosntf", 3, 2, seed=BASE.seed, noise=0.0)
    assert result.rel_error <= 1e-6
    assert result.wall_ms == 0.0
    assert len(result.I) == 3 and min(result.I) >= 1


def test_sweep_csv_is_reproducible(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    kwargs = dict(noise_levels=[0.0, 1e-3], trials=2, methods=["cosntf", "tcur-uniform"])
    records = sweep(BASE, out=first, **kwargs)
    sweep(BASE, out=second, **kwargs)
    assert first.read_bytes() == second.read_bytes()
    assert len(records) == 8
    assert [r.seed for r in records[:4]] == [11, 11, 12, 12]

    frame = pd.read_csv(first)
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 8 + 4


def test_write_csv_header(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(summarize([record("cosntf", 0, 0.0, 0.25)]), path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("cosntf,3,2,0,0,0.25,0.75")
