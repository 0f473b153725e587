"""Syndrome message-passing decoders with flooded, serial and layered schedules.

Sign conventions: a positive LLR favours "no error"; a syndrome bit of 1
flips the sign of every message leaving that check; a posterior of exactly
zero decodes to 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from . import _kernels as K
from .gf2 import SparseBinaryMatrix
from .layering import LayerCover, validate_cover

__all__ = [
    "DecoderConfig",
    "DecodeResult",
    "LcgState",
    "lcg_next",
    "init_llr",
    "check_update",
    "sample_layer_order",
    "default_budget",
    "Decoder",
    "decode",
]

log = logging.getLogger(__name__)

Algorithm = Literal["sp", "nms", "pnms"]
Schedule = Literal["flooded", "serial", "layered"]
_ALGOS = {"sp": K.ALGO_SP, "nms": K.ALGO_NMS, "pnms": K.ALGO_PNMS}

# decorrelates the perturbation stream from the layer-order stream
_PERTURBATION_SALT = 0x9E3779B9


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder variant, schedule and budgets.

    ``max_iterations`` is the flooded budget in iterations;
    ``max_layer_iterations`` is the serial/layered budget in layer
    applications. Left as None they default to 128 flooded iterations,
    64 serial sweeps, and floor(64 k / t) layer applications.
    """

    algorithm: Algorithm = "nms"
    schedule: Schedule = "layered"
    nms_factor: float = 0.875
    perturbation_set: tuple[float, ...] = (0.875, 0.9275)
    random_order: bool = False
    constrain_successive: bool = False
    max_iterations: int | None = None
    max_layer_iterations: int | None = None
    syndrome_check_period: int = 1
    message_clip: float = 30.0
    rng_seed: int = 0
    max_retries: int = 100

    def __post_init__(self):
        if self.algorithm not in _ALGOS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.schedule not in ("flooded", "serial", "layered"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if not self.perturbation_set:
            raise ValueError("perturbation_set must be nonempty")
        if self.message_clip <= 0:
            raise ValueError("message_clip must be positive")
        for name in ("max_iterations", "max_layer_iterations"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive")
        if self.syndrome_check_period < 1 or self.max_retries < 1:
            raise ValueError("syndrome_check_period and max_retries must be >= 1")

    def with_seed(self, seed: int) -> DecoderConfig:
        return replace(self, rng_seed=int(seed))


@dataclass
class DecodeResult:
    estimate: np.ndarray
    converged: bool
    layer_iterations_used: int
    iterations_used: int
    order_fallbacks: int = field(default=0, repr=False)


@dataclass
class LcgState:
    state: int = 0


def lcg_next(state: LcgState) -> tuple[LcgState, int]:
    """One step of x -> 1664525 x + 1013904223 mod 2^32."""
    nxt = (1664525 * state.state + 1013904223) & 0xFFFFFFFF
    return LcgState(nxt), nxt


def init_llr(p: float, clip: float = 30.0) -> float:
    """Channel LLR ln((1-p)/p) for an iid error probability p, capped at +-clip."""
    if not 0 < p < 1:
        raise ValueError(f"error probability must lie in (0, 1), got {p}")
    return float(np.clip(math.log1p(-p) - math.log(p), -clip, clip))


def check_update(eta, s_c: int, algorithm: Algorithm = "nms", factor=0.875, clip: float = 30.0):
    """Outgoing check-to-variable messages of a single check.

    ``factor`` may be a scalar or one value per edge (perturbed NMS draws
    them; see :class:`Decoder`). Ignored for SP.
    """
    eta = np.asarray(eta, dtype=np.float64)
    if eta.ndim != 1 or eta.size < 2:
        raise ValueError("a check needs at least two incoming messages")
    out = np.empty_like(eta)
    if algorithm == "sp":
        K.check_sp(eta, int(s_c) & 1, float(clip), out)
    elif algorithm in ("nms", "pnms"):
        fac = np.broadcast_to(np.asarray(factor, dtype=np.float64), eta.shape).copy()
        K.check_nms(eta, int(s_c) & 1, fac, float(clip), out)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return out


def sample_layer_order(
    k: int,
    rng: LcgState,
    conflict: np.ndarray | None = None,
    previous_last: int | None = None,
    max_retries: int = 100,
) -> tuple[list[int], LcgState]:
    """Fisher-Yates permutation of range(k) driven by the LCG.

    With a boolean ``conflict`` matrix, draws are repeated until no two
    consecutive layers (including ``previous_last`` before the first one)
    conflict. After ``max_retries`` failed draws the last one is returned
    unconstrained and a warning is logged.
    """
    if k < 1:
        raise ValueError("k must be positive")
    state = rng.state

    def draw():
        nonlocal state
        order = list(range(k))
        for i in range(k - 1, 0, -1):
            state = (1664525 * state + 1013904223) & 0xFFFFFFFF
            j = (state * (i + 1)) >> 32
            order[i], order[j] = order[j], order[i]
        return order

    def ok(order):
        if previous_last is not None and conflict[previous_last, order[0]]:
            return False
        return not any(conflict[a, b] for a, b in zip(order, order[1:]))

    order = draw()
    if conflict is not None:
        for _ in range(max_retries - 1):
            if ok(order):
                break
            order = draw()
        else:
            if not ok(order):
                log.warning("no conflict-free layer order after %d draws; using last", max_retries)
    return order, LcgState(state)


def default_budget(config: DecoderConfig, m: int, cover: LayerCover | None) -> int:
    """Budget in the schedule's own unit (iterations or layer applications)."""
    if config.schedule == "flooded":
        return config.max_iterations or 128
    if config.max_layer_iterations is not None:
        return config.max_layer_iterations
    if config.schedule == "serial":
        return 64 * m
    return math.floor(64 * cover.k / cover.t)


class Decoder:
    """Message-passing decoder bound to one parity-check matrix and schedule.

    Graph and schedule arrays are built once; :meth:`decode` can then be
    called repeatedly with different syndromes and seeds.
    """

    def __init__(self, H: SparseBinaryMatrix, config: DecoderConfig, cover: LayerCover | None = None):
        self.H = H
        self.config = config
        self._chk_ptr, self._chk_var = (a.astype(np.int64) for a in H.csr())
        self._var_ptr, var_chk = (a.astype(np.int64) for a in H.csc())
        self._var_chk = var_chk
        # edge id of (variable, check) pairs, in column order
        edge_check = np.repeat(np.arange(H.n_rows), H.row_weights())
        order = np.lexsort((edge_check, self._chk_var))
        self._var_edge = order.astype(np.int64)
        if np.any(H.row_weights() < 1):
            log.debug("H has empty rows; they are skipped by the check updates")

        if config.schedule == "layered":
            if cover is None:
                raise ValueError("layered schedule needs a cover")
            report = validate_cover(H, cover)
            if not report.valid:
                raise ValueError(f"cover is not valid for H: {'; '.join(report.problems)}")
        elif config.schedule == "serial":
            cover = LayerCover([[c] for c in range(H.n_rows)], H.n_rows)
        self.cover = cover
        if cover is not None:
            sizes = np.array(cover.sizes(), dtype=np.int64)
            self._layer_ptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
            self._layer_chk = np.fromiter(
                (c for L in cover.layers for c in L), dtype=np.int64, count=int(sizes.sum())
            )
            if config.constrain_successive and config.schedule == "layered":
                self._conflict = cover.conflicts()
            else:
                self._conflict = np.zeros((1, 1), dtype=np.bool_)
        self.budget = default_budget(config, H.n_rows, cover)
        self._pert = np.asarray(config.perturbation_set, dtype=np.float64)

    def decode(self, syndrome, p: float | None = None, llr=None, seed: int | None = None) -> DecodeResult:
        """Decode a syndrome with prior probability ``p`` (or explicit per-variable ``llr``)."""
        cfg = self.config
        synd = np.asarray(syndrome, dtype=np.uint8).ravel() & 1
        if synd.shape[0] != self.H.n_rows:
            raise ValueError(f"syndrome has length {synd.shape[0]}, expected {self.H.n_rows}")
        if llr is None:
            if p is None:
                raise ValueError("give either p or llr")
            llr = np.full(self.H.n_cols, init_llr(p, cfg.message_clip))
        llr = np.asarray(llr, dtype=np.float64)
        seed = cfg.rng_seed if seed is None else seed
        order_seed = int(seed) & 0xFFFFFFFF
        pert_seed = order_seed ^ _PERTURBATION_SALT
        algo = _ALGOS[cfg.algorithm]

        if cfg.schedule == "flooded":
            est, conv, its = K.flooded_decode(
                self._chk_ptr, self._chk_var, self._var_ptr, self._var_edge, self._var_chk,
                synd, llr, algo, cfg.nms_factor, self._pert, cfg.message_clip,
                self.budget, cfg.syndrome_check_period, pert_seed,
            )
            return DecodeResult(est, bool(conv), int(its), int(its))

        est, conv, its, fallbacks = K.layered_decode(
            self._chk_ptr, self._chk_var, self._var_ptr, self._var_chk,
            self._layer_ptr, self._layer_chk,
            synd, llr, algo, cfg.nms_factor, self._pert, cfg.message_clip,
            self.budget, cfg.syndrome_check_period, cfg.random_order,
            self._conflict, cfg.constrain_successive and cfg.schedule == "layered",
            order_seed, pert_seed, cfg.max_retries,
        )
        if fallbacks:
            log.warning("%d sweeps fell back to an unconstrained layer order", fallbacks)
        return DecodeResult(est, bool(conv), int(its), -(-int(its) // self.cover.k), int(fallbacks))


def decode(
    H: SparseBinaryMatrix,
    syndrome,
    p: float,
    cover: LayerCover | None = None,
    config: DecoderConfig | None = None,
) -> DecodeResult:
    """One-shot convenience wrapper around :class:`Decoder`."""
    return Decoder(H, config or DecoderConfig(), cover).decode(syndrome, p)
