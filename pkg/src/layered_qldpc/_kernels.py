"""Numba kernels for the message-passing decoders.

Edge e of check c is position e of the CSR row arrays (chk_ptr, chk_var);
var_ptr/var_edge list, per variable, the edge ids touching it.
"""

import numpy as np
from numba import njit

ALGO_SP = 0
ALGO_NMS = 1
ALGO_PNMS = 2

LCG_A = 1664525
LCG_C = 1013904223
MASK32 = 0xFFFFFFFF


@njit(cache=True)
def lcg_step(state):
    return (LCG_A * state + LCG_C) & MASK32


@njit(cache=True)
def uniform_index(value, n):
    # multiply-shift keeps the high bits of the LCG output
    return (value * n) >> 32


@njit(cache=True)
def fisher_yates(k, state, out):
    for i in range(k):
        out[i] = i
    for i in range(k - 1, 0, -1):
        state = lcg_step(state)
        j = uniform_index(state, i + 1)
        tmp = out[i]
        out[i] = out[j]
        out[j] = tmp
    return state


@njit(cache=True)
def order_ok(order, conflict, previous_last):
    k = order.shape[0]
    if previous_last >= 0 and conflict[previous_last, order[0]]:
        return False
    for i in range(k - 1):
        if conflict[order[i], order[i + 1]]:
            return False
    return True


@njit(cache=True)
def sample_order(k, state, conflict, use_conflict, previous_last, max_retries, out):
    """Returns (state, fell_back)."""
    state = fisher_yates(k, state, out)
    if not use_conflict:
        return state, False
    for _ in range(max_retries - 1):
        if order_ok(out, conflict, previous_last):
            return state, False
        state = fisher_yates(k, state, out)
    return state, not order_ok(out, conflict, previous_last)


@njit(cache=True)
def check_sp(eta, sc, clip, out):
    d = eta.shape[0]
    th = np.empty(d)
    for i in range(d):
        th[i] = np.tanh(0.5 * eta[i])
    # prefix/suffix products exclude the target edge without division
    prefix = 1.0
    for i in range(d):
        out[i] = prefix
        prefix *= th[i]
    suffix = 1.0
    sign = -1.0 if sc else 1.0
    for i in range(d - 1, -1, -1):
        prod = out[i] * suffix
        suffix *= th[i]
        if prod >= 1.0:
            val = clip
        elif prod <= -1.0:
            val = -clip
        else:
            val = np.log1p(prod) - np.log1p(-prod)
        val *= sign
        if val > clip:
            val = clip
        elif val < -clip:
            val = -clip
        out[i] = val


@njit(cache=True)
def check_nms(eta, sc, factors, clip, out):
    d = eta.shape[0]
    min1 = np.inf
    min2 = np.inf
    pos = -1
    negs = 1 if sc else 0
    for i in range(d):
        a = abs(eta[i])
        if eta[i] < 0:
            negs += 1
        if a < min1:
            min2 = min1
            min1 = a
            pos = i
        elif a < min2:
            min2 = a
    for i in range(d):
        mag = min2 if i == pos else min1
        n = negs - (1 if eta[i] < 0 else 0)
        val = factors[i] * mag
        if n & 1:
            val = -val
        if val > clip:
            val = clip
        elif val < -clip:
            val = -clip
        out[i] = val


@njit(cache=True)
def _clamp(x, lim):
    if x > lim:
        return lim
    if x < -lim:
        return -lim
    return x


@njit(cache=True)
def _fill_factors(algo, factor, pert, pstate, d, out):
    if algo == ALGO_PNMS:
        for i in range(d):
            pstate = lcg_step(pstate)
            out[i] = pert[uniform_index(pstate, pert.shape[0])]
    else:
        for i in range(d):
            out[i] = factor
    return pstate


@njit(cache=True)
def _flip(v, var_ptr, var_chk, cur, synd, mismatch):
    for t in range(var_ptr[v], var_ptr[v + 1]):
        c = var_chk[t]
        cur[c] ^= 1
        if cur[c] == synd[c]:
            mismatch -= 1
        else:
            mismatch += 1
    return mismatch


@njit(cache=True)
def layered_decode(
    chk_ptr, chk_var, var_ptr, var_chk,
    layer_ptr, layer_chk,
    synd, llr, algo, factor, pert, clip,
    budget, check_period, random_order, conflict, use_conflict,
    order_seed, pert_seed, max_retries,
):
    """Layer-by-layer decoding; serial decoding is the singleton-layer case.

    Returns (estimate, converged, layer_iterations, fallbacks).
    """
    m = chk_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1
    k = layer_ptr.shape[0] - 1
    mu = np.zeros(chk_var.shape[0])
    post = llr.copy()
    hard = np.zeros(n, dtype=np.uint8)
    cur = np.zeros(m, dtype=np.uint8)
    for v in range(n):
        if post[v] < 0:
            hard[v] = 1
            for t in range(var_ptr[v], var_ptr[v + 1]):
                cur[var_chk[t]] ^= 1
    mismatch = 0
    for c in range(m):
        if cur[c] != synd[c]:
            mismatch += 1
    if mismatch == 0:
        return hard, True, 0, 0

    maxd = 0
    for c in range(m):
        if chk_ptr[c + 1] - chk_ptr[c] > maxd:
            maxd = chk_ptr[c + 1] - chk_ptr[c]
    eta = np.empty(maxd)
    out = np.empty(maxd)
    fac = np.empty(maxd)
    order = np.arange(k)
    ostate = order_seed & MASK32
    pstate = pert_seed & MASK32
    previous_last = -1
    fallbacks = 0
    its = 0
    while its < budget:
        if random_order:
            ostate, fell = sample_order(
                k, ostate, conflict, use_conflict, previous_last, max_retries, order
            )
            if fell:
                fallbacks += 1
        for pos in range(k):
            if its >= budget:
                break
            li = order[pos]
            for q in range(layer_ptr[li], layer_ptr[li + 1]):
                c = layer_chk[q]
                e0 = chk_ptr[c]
                d = chk_ptr[c + 1] - e0
                for i in range(d):
                    eta[i] = _clamp(post[chk_var[e0 + i]] - mu[e0 + i], clip)
                if algo == ALGO_SP:
                    check_sp(eta[:d], synd[c], clip, out[:d])
                else:
                    pstate = _fill_factors(algo, factor, pert, pstate, d, fac)
                    check_nms(eta[:d], synd[c], fac[:d], clip, out[:d])
                for i in range(d):
                    e = e0 + i
                    v = chk_var[e]
                    g = post[v] - mu[e] + out[i]
                    mu[e] = out[i]
                    post[v] = g
                    h = 1 if g < 0 else 0
                    if h != hard[v]:
                        hard[v] = h
                        mismatch = _flip(v, var_ptr, var_chk, cur, synd, mismatch)
            its += 1
            previous_last = li
            if its % check_period == 0 and mismatch == 0:
                return hard, True, its, fallbacks
    return hard, mismatch == 0, its, fallbacks


@njit(cache=True)
def flooded_decode(
    chk_ptr, chk_var, var_ptr, var_edge, var_chk,
    synd, llr, algo, factor, pert, clip,
    budget, check_period, pert_seed,
):
    """Returns (estimate, converged, iterations)."""
    m = chk_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1
    n_edges = chk_var.shape[0]
    mu = np.zeros(n_edges)
    post = llr.copy()
    hard = np.zeros(n, dtype=np.uint8)
    for v in range(n):
        hard[v] = 1 if post[v] < 0 else 0
    if _syndrome_matches(chk_ptr, chk_var, hard, synd):
        return hard, True, 0
    maxd = 0
    for c in range(m):
        if chk_ptr[c + 1] - chk_ptr[c] > maxd:
            maxd = chk_ptr[c + 1] - chk_ptr[c]
    eta = np.empty(maxd)
    out = np.empty(maxd)
    fac = np.empty(maxd)
    new_mu = np.empty(n_edges)
    pstate = pert_seed & MASK32
    for it in range(1, budget + 1):
        for c in range(m):
            e0 = chk_ptr[c]
            d = chk_ptr[c + 1] - e0
            for i in range(d):
                eta[i] = _clamp(post[chk_var[e0 + i]] - mu[e0 + i], clip)
            if algo == ALGO_SP:
                check_sp(eta[:d], synd[c], clip, out[:d])
            else:
                pstate = _fill_factors(algo, factor, pert, pstate, d, fac)
                check_nms(eta[:d], synd[c], fac[:d], clip, out[:d])
            for i in range(d):
                new_mu[e0 + i] = out[i]
        mu[:] = new_mu
        for v in range(n):
            g = llr[v]
            for t in range(var_ptr[v], var_ptr[v + 1]):
                g += mu[var_edge[t]]
            post[v] = g
            hard[v] = 1 if g < 0 else 0
        if it % check_period == 0 and _syndrome_matches(chk_ptr, chk_var, hard, synd):
            return hard, True, it
    return hard, _syndrome_matches(chk_ptr, chk_var, hard, synd), budget


@njit(cache=True)
def _syndrome_matches(chk_ptr, chk_var, hard, synd):
    m = chk_ptr.shape[0] - 1
    for c in range(m):
        s = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            s ^= hard[chk_var[e]]
        if s != synd[c]:
            return False
    return True
