"""Closed-form decoding latency of parallel, serial and layered architectures.

All arithmetic is exact (Fractions); times are in the unit of the clock
period, nanoseconds by convention.

    parallel:  T * 2 * it_max
    serial:    T * (it_max / 2) * m
    layered:   T * 2 * (it_max / 2) * k/t

Serial and layered decoders are assumed to need half the iterations of the
parallel one; pass ``iterations`` to override that count directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

__all__ = ["LatencyQuery", "latency", "exact"]

Architecture = Literal["parallel", "serial", "layered"]


def exact(x) -> Fraction:
    """Fraction from an int, Fraction, decimal string, or float (via its shortest repr)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True)
class LatencyQuery:
    architecture: Architecture
    clock_period: Fraction | float | str
    it_max: int | None = None
    m: int | None = None
    fractional_layers: Fraction | float | str | None = None
    iterations: Fraction | float | str | None = None


def latency(q: LatencyQuery) -> Fraction:
    if q.architecture not in ("parallel", "serial", "layered"):
        raise ValueError(f"unknown architecture {q.architecture!r}")
    period = exact(q.clock_period)
    if period <= 0:
        raise ValueError("clock_period must be positive")
    if q.iterations is not None:
        its = exact(q.iterations)
    elif q.it_max is not None:
        its = exact(q.it_max) if q.architecture == "parallel" else exact(q.it_max) / 2
    else:
        raise ValueError("it_max (or iterations) is required")
    if its <= 0:
        raise ValueError("iteration count must be positive")
    if q.architecture == "parallel":
        return period * 2 * its
    if q.architecture == "serial":
        if q.m is None or q.m <= 0:
            raise ValueError("serial latency needs a positive check count m")
        return period * its * q.m
    if q.fractional_layers is None or exact(q.fractional_layers) <= 0:
        raise ValueError("layered latency needs a positive fractional layer number")
    return period * 2 * its * exact(q.fractional_layers)
