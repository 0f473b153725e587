import numpy as np
import pytest

from layered_qldpc import DecoderConfig, gf2_kernel, in_rowspace, mat_vec
from layered_qldpc.simulation import (
    CSV_COLUMNS,
    Classifier,
    Outcome,
    classify,
    run_trials,
    sample_z_error,
    stats_to_csv,
    trial_seeds,
)


def test_sample_z_error():
    assert not sample_z_error(100, 0.0, np.random.default_rng(0)).any()
    heavy = sample_z_error(10_000, 1 - 1e-9, np.random.default_rng(0))
    assert heavy.sum() > 9_990
    a = sample_z_error(500, 0.1, np.random.default_rng(3))
    b = sample_z_error(500, 0.1, np.random.default_rng(3))
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        sample_z_error(5, 1.0, np.random.default_rng(0))


@pytest.fixture(scope="module")
def c2_logical(c2):
    hz = c2.h_z.to_dense()
    for v in gf2_kernel(c2.h_x):
        if not in_rowspace(hz, v):
            return v
    raise AssertionError("no logical operator found")


def test_classify_cases(c2, c2_logical, rng):
    e = (rng.random(c2.n) < 0.01).astype(np.uint8)
    assert classify(e, e, c2) is Outcome.SUCCESS
    stab = c2.h_z.to_dense()[5]
    assert classify(e, e ^ stab, c2) is Outcome.SUCCESS
    assert classify(e, e ^ c2_logical, c2) is Outcome.LOGICAL_ERROR
    flipped = e.copy()
    flipped[0] ^= 1
    assert classify(e, flipped, c2) is Outcome.NON_CONVERGENCE


def test_classify_closed_under_stabilizers(c2, c2_logical, rng):
    cl = Classifier(c2)
    hz = c2.h_z.to_dense()
    e = (rng.random(c2.n) < 0.02).astype(np.uint8)
    for base in (e, e ^ c2_logical):
        expected = cl(e, base)
        for _ in range(10):
            z = (rng.integers(0, 2, c2.m_z) @ hz % 2).astype(np.uint8)
            assert cl(e, base ^ z) is expected


def test_trial_seeds_follow_lcg():
    assert trial_seeds(0, 2) == [1013904223, (1664525 * 1013904223 + 1013904223) % 2**32]


def test_noiseless_runs_never_fail(c2, c2_cover):
    for sched, cover in (("flooded", None), ("layered", c2_cover)):
        stats = run_trials(c2, cover, DecoderConfig("nms", sched), 0.0, 20, 1)
        assert stats.frame_error_rate == 0 and stats.mean_layer_iterations == 0


def test_run_trials_is_reproducible(c2, c2_cover):
    cfg = DecoderConfig("pnms", "layered", random_order=True)
    records = []
    a = run_trials(c2, c2_cover, cfg, 0.04, 60, 11, records)
    b = run_trials(c2, c2_cover, cfg, 0.04, 60, 11)
    assert a == b
    assert a.successes + a.logical_errors + a.non_convergences == a.trials == len(records)
    assert 0 <= a.frame_error_rate <= 1
    assert a.non_convergences == sum(r.outcome is Outcome.NON_CONVERGENCE for r in records)
    for r in records:
        if r.outcome is Outcome.SUCCESS:
            assert not mat_vec(c2.h_x, r.error ^ r.estimate).any()


def test_csv_layout(c2, c2_cover):
    stats = run_trials(c2, c2_cover, DecoderConfig("nms", "layered"), 0.02, 5, 2)
    lines = stats_to_csv([stats]).splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert row["code"] == "c2" and row["schedule"] == "layered" and row["trials"] == "5"
