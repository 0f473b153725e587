"""Monte Carlo Z-noise simulation of a decoder on a CSS code."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .codes import CssCode
from .decoder import Decoder, DecoderConfig
from .gf2 import RowSpace, mat_vec
from .layering import LayerCover

__all__ = [
    "Outcome",
    "TrialRecord",
    "SimStats",
    "sample_z_error",
    "classify",
    "Classifier",
    "trial_seeds",
    "run_trials",
    "CSV_COLUMNS",
    "stats_to_csv",
]


class Outcome(str, Enum):
    SUCCESS = "success"
    LOGICAL_ERROR = "logical_error"
    NON_CONVERGENCE = "non_convergence"


@dataclass
class TrialRecord:
    error: np.ndarray
    estimate: np.ndarray
    outcome: Outcome
    layer_iterations_used: int


@dataclass
class SimStats:
    trials: int
    successes: int
    logical_errors: int
    non_convergences: int
    mean_layer_iterations: float
    seed: int
    p: float
    config: dict = field(default_factory=dict)
    code: str = ""

    @property
    def frame_error_rate(self) -> float:
        return (self.logical_errors + self.non_convergences) / self.trials

    @property
    def logical_error_rate(self) -> float:
        return self.logical_errors / self.trials

    @property
    def nonconvergence_rate(self) -> float:
        return self.non_convergences / self.trials


def sample_z_error(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if not 0 <= p < 1:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    return (rng.random(n) < p).astype(np.uint8)


class Classifier:
    """Outcome classification against a fixed code (caches the H_Z rowspace)."""

    def __init__(self, code: CssCode):
        self.code = code
        self._stabilizers = RowSpace(code.h_z)

    def __call__(self, error, estimate) -> Outcome:
        e = np.asarray(error, dtype=np.uint8)
        est = np.asarray(estimate, dtype=np.uint8)
        if not np.array_equal(mat_vec(self.code.h_x, e), mat_vec(self.code.h_x, est)):
            return Outcome.NON_CONVERGENCE
        if (e ^ est) in self._stabilizers:
            return Outcome.SUCCESS
        return Outcome.LOGICAL_ERROR


def classify(error, estimate, code: CssCode) -> Outcome:
    """success iff the estimate matches the syndrome and differs from the error by a stabilizer."""
    return Classifier(code)(error, estimate)


def trial_seeds(seed: int, n_trials: int) -> list[int]:
    """Per-trial 32-bit seeds: successive outputs of the LCG started at ``seed``."""
    out, state = [], int(seed) & 0xFFFFFFFF
    for _ in range(n_trials):
        state = (1664525 * state + 1013904223) & 0xFFFFFFFF
        out.append(state)
    return out


def run_trials(
    code: CssCode,
    cover: LayerCover | None,
    config: DecoderConfig,
    p: float,
    n_trials: int,
    seed: int,
    records: list | None = None,
) -> SimStats:
    """Decode ``n_trials`` iid Z errors with H_X; optionally append TrialRecords to ``records``.

    Trial i samples its error with numpy's PCG64 seeded by the i-th trial
    seed and runs the decoder with that same seed, so any subset of trials
    can be replayed independently.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    decoder = Decoder(code.h_x, config, cover)
    classifier = Classifier(code)
    # the prior must be finite; p = 0 is decoded with a saturated prior
    prior_p = p if p > 0 else None
    counts = {o: 0 for o in Outcome}
    total_its = 0
    for ts in trial_seeds(seed, n_trials):
        err = sample_z_error(code.n, p, np.random.default_rng(ts))
        synd = mat_vec(code.h_x, err)
        if prior_p is None:
            res = decoder.decode(synd, llr=np.full(code.n, config.message_clip), seed=ts)
        else:
            res = decoder.decode(synd, prior_p, seed=ts)
        outcome = classifier(err, res.estimate) if res.converged else Outcome.NON_CONVERGENCE
        counts[outcome] += 1
        total_its += res.layer_iterations_used
        if records is not None:
            records.append(TrialRecord(err, res.estimate, outcome, res.layer_iterations_used))
    return SimStats(
        trials=n_trials,
        successes=counts[Outcome.SUCCESS],
        logical_errors=counts[Outcome.LOGICAL_ERROR],
        non_convergences=counts[Outcome.NON_CONVERGENCE],
        mean_layer_iterations=total_its / n_trials,
        seed=seed,
        p=p,
        config=asdict(config),
        code=code.name,
    )


CSV_COLUMNS = (
    "code", "schedule", "algo", "random_order", "p", "trials", "seed",
    "frame_error_rate", "logical_error_rate", "nonconvergence_rate", "mean_layer_iterations",
)


def stats_to_csv(stats: list[SimStats], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for s in stats:
        writer.writerow([
            s.code, s.config.get("schedule"), s.config.get("algorithm"),
            int(bool(s.config.get("random_order"))), repr(s.p), s.trials, s.seed,
            repr(s.frame_error_rate), repr(s.logical_error_rate),
            repr(s.nonconvergence_rate), repr(s.mean_layer_iterations),
        ])
    return buf.getvalue()
