import itertools
import math

import numpy as np
import pytest

from layered_qldpc import (
    Decoder,
    DecoderConfig,
    LayerCover,
    LcgState,
    SparseBinaryMatrix,
    b1_cover,
    check_update,
    circulant,
    decode,
    greedy_decompose,
    hypergraph_product,
    init_llr,
    lcg_next,
    mat_vec,
    sample_layer_order,
)
from layered_qldpc import _kernels as K

TREE = SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
SMALL = hypergraph_product(circulant({0, 1, 3}, 7), circulant({0, 1, 3}, 7))


def brute_force_check(eta, s_c, algorithm, factor=0.875):
    out = []
    for i in range(len(eta)):
        others = [x for j, x in enumerate(eta) if j != i]
        if algorithm == "sp":
            val = 2 * math.atanh(math.prod(math.tanh(x / 2) for x in others))
        else:
            val = factor * math.prod(1 if x >= 0 else -1 for x in others) * min(map(abs, others))
        out.append(-val if s_c else val)
    return out


def test_init_llr():
    assert init_llr(0.5) == 0
    assert init_llr(0.1) == pytest.approx(math.log(9))
    assert init_llr(1e-300) == 30.0
    for p in (0, 1, -0.1):
        with pytest.raises(ValueError):
            init_llr(p)


def test_nms_example():
    out = check_update([2, -3, 5], 0, "nms", 0.875)
    assert out.tolist() == pytest.approx([-2.625, 1.75, -1.75])


@pytest.mark.parametrize("algorithm", ["sp", "nms"])
def test_check_update_matches_brute_force(algorithm, rng):
    for _ in range(50):
        d = rng.integers(2, 9)
        eta = rng.normal(0, 4, d)
        for s_c in (0, 1):
            got = check_update(eta, s_c, algorithm)
            assert got == pytest.approx(brute_force_check(eta, s_c, algorithm), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("algorithm", ["sp", "nms"])
def test_syndrome_bit_flips_sign(algorithm, rng):
    eta = rng.normal(0, 3, 6)
    assert np.array_equal(check_update(eta, 1, algorithm), -check_update(eta, 0, algorithm))


def test_sp_saturates_at_clip():
    out = check_update([1e3, 1e3], 0, "sp", clip=30.0)
    assert out.tolist() == [30.0, 30.0]


def test_check_update_needs_two_edges():
    with pytest.raises(ValueError):
        check_update([1.0], 0)


def test_per_edge_factors():
    out = check_update([2, -3, 5], 0, "pnms", [0.5, 1.0, 0.9275])
    assert out.tolist() == pytest.approx([-3 * 0.5, 2 * 1.0, -2 * 0.9275])


def test_lcg():
    assert lcg_next(LcgState(0))[1] == 1013904223
    assert lcg_next(LcgState(1))[1] == 1015568748


def test_sample_layer_order_basics():
    assert sample_layer_order(1, LcgState(5))[0] == [0]
    a, sa = sample_layer_order(10, LcgState(42))
    b, sb = sample_layer_order(10, LcgState(42))
    assert a == b and sa == sb and sorted(a) == list(range(10))


def test_orders_cover_all_permutations():
    seen, state = set(), LcgState(9)
    for _ in range(600):
        order, state = sample_layer_order(3, state)
        seen.add(tuple(order))
    assert len(seen) == 6


def test_b1_conflict_rules():
    conf = b1_cover().conflicts()
    ok = K.order_ok(np.arange(7), conf, -1)
    assert ok
    assert not K.order_ok(np.array([0, 3, 1, 2, 4, 5, 6]), conf, -1)
    assert not K.order_ok(np.array([4, 0, 1, 2, 3, 5, 6]), conf, 1)


def test_constrained_orders_avoid_conflicts():
    conf = b1_cover().conflicts()
    state, last = LcgState(3), None
    for _ in range(200):
        order, state = sample_layer_order(7, state, conf, last)
        chain = ([last] if last is not None else []) + order
        assert not any(conf[x, y] for x, y in zip(chain, chain[1:]))
        last = order[-1]


def test_impossible_constraint_falls_back(caplog):
    conf = ~np.eye(3, dtype=bool)
    order, _ = sample_layer_order(3, LcgState(0), conf, max_retries=5)
    assert sorted(order) == [0, 1, 2]
    assert "no conflict-free" in caplog.text


@pytest.mark.parametrize("use_conflict", [False, True])
def test_kernel_sampler_matches_python(use_conflict):
    conf = b1_cover().conflicts()
    py_state, last = LcgState(77), None
    nb_state, nb_last = 77, -1
    out = np.empty(7, dtype=np.int64)
    for _ in range(100):
        order, py_state = sample_layer_order(7, py_state, conf if use_conflict else None, last)
        nb_state, _ = K.sample_order(7, nb_state, conf, use_conflict, nb_last, 100, out)
        assert out.tolist() == order and nb_state == py_state.state
        last = nb_last = order[-1]


def test_zero_syndrome_short_circuits():
    for sched in ("flooded", "serial", "layered"):
        cover = greedy_decompose(SMALL.h_x) if sched == "layered" else None
        res = decode(SMALL.h_x, np.zeros(SMALL.m_x), 0.05, cover, DecoderConfig("nms", sched))
        assert res.converged and res.layer_iterations_used == 0 and not res.estimate.any()


@pytest.mark.parametrize("sched", ["flooded", "serial"])
def test_tree_code_sp_is_maximum_likelihood(sched):
    p, s = 0.1, np.array([1, 0])
    # brute-force ML over all patterns with the right syndrome
    best = max(
        (e for e in itertools.product((0, 1), repeat=3) if mat_vec(TREE, e).tolist() == s.tolist()),
        key=lambda e: p ** sum(e) * (1 - p) ** (3 - sum(e)),
    )
    res = decode(TREE, s, p, config=DecoderConfig("sp", sched))
    assert res.converged
    assert tuple(res.estimate) == best == (1, 0, 0)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        Decoder(TREE, DecoderConfig("nms", "layered"))
    with pytest.raises(ValueError):
        Decoder(TREE, DecoderConfig("nms", "layered"), LayerCover([[0, 1]], 2))
    with pytest.raises(ValueError):
        decode(TREE, [1, 0, 0], 0.1, config=DecoderConfig("nms", "serial"))
    with pytest.raises(ValueError):
        DecoderConfig(perturbation_set=())
    with pytest.raises(ValueError):
        DecoderConfig(max_iterations=0)


CONFIGS = [
    DecoderConfig(algo, sched, random_order=ro)
    for algo in ("sp", "nms", "pnms")
    for sched in ("flooded", "serial", "layered")
    for ro in ((False, True) if sched != "flooded" else (False,))
]


@pytest.mark.parametrize("config", CONFIGS, ids=lambda c: f"{c.algorithm}-{c.schedule}-{int(c.random_order)}")
def test_converged_means_syndrome_matched(config, rng):
    H = SMALL.h_x
    dec = Decoder(H, config, greedy_decompose(H))
    for trial in range(25):
        e = (rng.random(H.n_cols) < 0.06).astype(np.uint8)
        s = mat_vec(H, e)
        res = dec.decode(s, 0.06, seed=trial)
        if res.converged:
            assert np.array_equal(mat_vec(H, res.estimate), s)
        again = dec.decode(s, 0.06, seed=trial)
        assert np.array_equal(res.estimate, again.estimate)
        assert res.layer_iterations_used == again.layer_iterations_used


@pytest.mark.parametrize("algorithm", ["sp", "pnms"])
@pytest.mark.parametrize("random_order", [False, True])
def test_serial_equals_singleton_layers(algorithm, random_order, rng):
    H = SMALL.h_x
    singletons = LayerCover([[c] for c in range(H.n_rows)], H.n_rows)
    budget = 20 * H.n_rows
    ser = Decoder(H, DecoderConfig(algorithm, "serial", random_order=random_order, max_layer_iterations=budget))
    lay = Decoder(H, DecoderConfig(algorithm, "layered", random_order=random_order, max_layer_iterations=budget), singletons)
    for trial in range(20):
        s = mat_vec(H, (rng.random(H.n_cols) < 0.08).astype(np.uint8))
        a, b = ser.decode(s, 0.08, seed=trial), lay.decode(s, 0.08, seed=trial)
        assert np.array_equal(a.estimate, b.estimate)
        assert (a.converged, a.layer_iterations_used) == (b.converged, b.layer_iterations_used)


@pytest.mark.parametrize("algorithm", ["sp", "nms"])
def test_within_layer_order_is_irrelevant(algorithm, rng, c2, c2_cover):
    shuffled = LayerCover([rng.permutation(L) for L in c2_cover.layers], c2_cover.m)
    cfg = DecoderConfig(algorithm, "layered", max_layer_iterations=40)
    a_dec, b_dec = Decoder(c2.h_x, cfg, c2_cover), Decoder(c2.h_x, cfg, shuffled)
    for _ in range(10):
        s = mat_vec(c2.h_x, (rng.random(c2.n) < 0.03).astype(np.uint8))
        a, b = a_dec.decode(s, 0.03), b_dec.decode(s, 0.03)
        assert np.array_equal(a.estimate, b.estimate)
        assert a.layer_iterations_used == b.layer_iterations_used


@pytest.mark.parametrize("algorithm", ["sp", "nms"])
def test_flooded_is_check_permutation_invariant(algorithm, rng):
    H = SMALL.h_x
    perm = rng.permutation(H.n_rows)
    Hp = H.submatrix(perm)
    cfg = DecoderConfig(algorithm, "flooded", max_iterations=30)
    for _ in range(15):
        e = (rng.random(H.n_cols) < 0.08).astype(np.uint8)
        s = mat_vec(H, e)
        a = decode(H, s, 0.08, config=cfg)
        b = decode(Hp, s[perm], 0.08, config=cfg)
        assert np.array_equal(a.estimate, b.estimate) and a.iterations_used == b.iterations_used


@pytest.mark.parametrize("sched", ["flooded", "serial"])
def test_single_value_perturbation_is_plain_nms(sched, rng):
    H = SMALL.h_x
    nms = Decoder(H, DecoderConfig("nms", sched, nms_factor=0.9))
    pnms = Decoder(H, DecoderConfig("pnms", sched, perturbation_set=(0.9,)))
    for trial in range(15):
        s = mat_vec(H, (rng.random(H.n_cols) < 0.08).astype(np.uint8))
        a, b = nms.decode(s, 0.08, seed=trial), pnms.decode(s, 0.08, seed=trial)
        assert np.array_equal(a.estimate, b.estimate)


def test_default_budgets(c2, c2_cover, b1):
    assert Decoder(c2.h_x, DecoderConfig(schedule="flooded")).budget == 128
    assert Decoder(c2.h_x, DecoderConfig(schedule="serial")).budget == 64 * 961
    assert Decoder(c2.h_x, DecoderConfig(schedule="layered"), c2_cover).budget == 320
    assert Decoder(b1.h_x, DecoderConfig(schedule="layered"), b1_cover()).budget == 224


def test_b1_constrained_layered_decoding(b1, rng):
    cfg = DecoderConfig("pnms", "layered", random_order=True, constrain_successive=True)
    dec = Decoder(b1.h_x, cfg, b1_cover())
    for trial in range(20):
        e = (rng.random(b1.n) < 0.02).astype(np.uint8)
        res = dec.decode(mat_vec(b1.h_x, e), 0.02, seed=trial)
        assert res.order_fallbacks == 0
        if res.converged:
            assert np.array_equal(mat_vec(b1.h_x, res.estimate), mat_vec(b1.h_x, e))


def test_syndrome_check_period_delays_stopping(c2, c2_cover):
    e = np.zeros(c2.n, dtype=np.uint8)
    e[17] = 1
    s = mat_vec(c2.h_x, e)
    every = Decoder(c2.h_x, DecoderConfig("nms", "layered"), c2_cover).decode(s, 0.01)
    sweep = Decoder(c2.h_x, DecoderConfig("nms", "layered", syndrome_check_period=5), c2_cover).decode(s, 0.01)
    assert every.converged and sweep.converged
    assert sweep.layer_iterations_used % 5 == 0
    assert sweep.layer_iterations_used >= every.layer_iterations_used
