"""Exceptions to the local-global principle and curvature frequency statistics."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import PackingDescriptor, Quadruple
from .enumerate import DEFAULT_MEMORY_BUDGET, CurvatureHistogram, count_circles, histogram
from .errors import UsageError
from .orbits import gamma_profile


@dataclass
class ExceptionReport:
    """Admissible integers in [lo, hi) that never occur as a curvature."""

    root: Quadruple
    lo: int
    hi: int
    exceptions: List[int]
    residue_filter: Optional[int] = None

    @property
    def by_residue(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for n in self.exceptions:
            out.setdefault(n % 24, []).append(n)
        return dict(sorted(out.items()))

    @property
    def counts_by_residue(self) -> Dict[int, int]:
        return {r: len(v) for r, v in self.by_residue.items()}

    @property
    def largest(self) -> Optional[int]:
        return self.exceptions[-1] if self.exceptions else None

    def to_json(self) -> dict:
        return {
            "root": list(self.root),
            "lo": self.lo,
            "hi": self.hi,
            "exceptions": self.exceptions,
            "by_residue": {str(r): v for r, v in self.by_residue.items()},
        }


def _admissible_mask(packing: PackingDescriptor) -> np.ndarray:
    mask = np.zeros(24, dtype=bool)
    mask[gamma_profile(packing).admissible] = True
    return mask


def exceptions_in_histogram(hist: CurvatureHistogram, admissible: Sequence[int],
                            residue_filter: Optional[int] = None) -> List[int]:
    values = np.arange(hist.lo, hist.hi, dtype=np.int64)
    mask = np.zeros(24, dtype=bool)
    mask[list(admissible)] = True
    hit = mask[values % 24] & (hist.counts == 0)
    if residue_filter is not None:
        hit &= values % 24 == residue_filter
    return values[hit].tolist()


def find_exceptions(packing: PackingDescriptor, lo: int, hi: int,
                    residue_filter: Optional[int] = None, *, chunk_size: Optional[int] = None,
                    threads: int = 1, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> ExceptionReport:
    """Scan [lo, hi) for admissible integers of multiplicity zero.

    Each chunk [a, b) is enumerated with pruning bound b, which already
    produces every curvature below b, so chunking never misses a circle.
    """
    if residue_filter is not None and not 0 <= residue_filter < 24:
        raise UsageError("residue must be in 0..23")
    if not 1 <= lo < hi:
        raise UsageError("need 1 <= lo < hi")
    admissible = gamma_profile(packing).admissible
    step = hi - lo if chunk_size is None else int(chunk_size)
    if step <= 0:
        raise UsageError("chunk_size must be positive")
    found: List[int] = []
    for a in range(lo, hi, step):
        b = min(a + step, hi)
        h = histogram(packing, a, b, threads=threads, memory_budget=memory_budget)
        found.extend(exceptions_in_histogram(h, admissible, residue_filter))
    return ExceptionReport(packing.root, lo, hi, found, residue_filter)


@dataclass
class FrequencyDistribution:
    """delta[m] = how many x = n (mod 24) in [lo, hi) occur exactly m times."""

    residue: int
    lo: int
    hi: int
    delta: Dict[int, int] = field(default_factory=dict)
    mean: float = 0.0
    variance: float = 0.0

    @property
    def members(self) -> int:
        return sum(self.delta.values())

    @property
    def total(self) -> int:
        return sum(m * c for m, c in self.delta.items())

    def to_csv(self, predicted: Optional[float] = None) -> str:
        buf = io.StringIO()
        buf.write("m,count\n")
        for m, c in sorted(self.delta.items()):
            buf.write(f"{m},{c}\n")
        buf.write("mean,variance,predicted_mean\n")
        pred = "" if predicted is None else f"{predicted:.12g}"
        buf.write(f"{self.mean:.12g},{self.variance:.12g},{pred}\n")
        return buf.getvalue()


def residue_members(lo: int, hi: int, n: int) -> int:
    """Exact count of x in [lo, hi) with x = n (mod 24)."""
    first = lo + (n - lo) % 24
    return 0 if first >= hi else (hi - 1 - first) // 24 + 1


def frequency_distribution(hist: CurvatureHistogram, n: int) -> FrequencyDistribution:
    if not 0 <= n < 24:
        raise UsageError("residue must be in 0..23")
    start = (n - hist.lo) % 24
    sub = hist.counts[start::24].astype(np.int64)
    fd = FrequencyDistribution(n, hist.lo, hist.hi)
    if len(sub) == 0:
        return fd
    ms, cs = np.unique(sub, return_counts=True)
    fd.delta = {int(m): int(c) for m, c in zip(ms, cs)}
    fd.mean = float(sub.mean())
    fd.variance = float(sub.var())
    return fd


def predicted_mean(packing: PackingDescriptor, n: int, lo: int, hi: int, mode: str = "measured",
                   c_P: Optional[float] = None, delta: Optional[float] = None,
                   counts: Optional[Tuple[int, int]] = None, threads: int = 1) -> float:
    """Expected multiplicity of integers = n (mod 24) in [lo, hi).

    mean = 24 * gamma(n) * (N(hi) - N(lo)) / (hi - lo).  ``measured`` takes the
    counts from enumeration (or ``counts=(N(lo), N(hi))``); ``asymptotic``
    substitutes N(x) = c_P * x**delta.
    """
    if not 0 <= n < 24:
        raise UsageError("residue must be in 0..23")
    if not 1 <= lo < hi:
        raise UsageError("need 1 <= lo < hi")
    gamma = gamma_profile(packing).gamma[n]
    if gamma == 0:
        return 0.0
    if mode == "asymptotic":
        if c_P is None or delta is None:
            raise UsageError("asymptotic mode needs c_P and delta")
        dn = c_P * (hi**delta - lo**delta)
    elif mode == "measured":
        if counts is None:
            counts = (count_circles(packing, lo, threads=threads),
                      count_circles(packing, hi, threads=threads))
        dn = counts[1] - counts[0]
    else:
        raise UsageError(f"unknown mode {mode!r}")
    return 24 * float(gamma) * dn / (hi - lo)


def fit_growth(samples: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Least-squares line through (log x, log N); returns (slope, exp(intercept))."""
    if len(samples) < 3:
        raise UsageError("need at least three (x, N) samples")
    xs = np.array([s[0] for s in samples], dtype=float)
    ns = np.array([s[1] for s in samples], dtype=float)
    if np.any(xs <= 0) or np.any(ns <= 0):
        raise UsageError("samples must be positive")
    if len(np.unique(xs)) < 2:
        raise UsageError("samples need distinct x values")
    slope, intercept = np.polyfit(np.log(xs), np.log(ns), 1)
    return float(slope), float(math.exp(intercept))


def report_json(report: ExceptionReport) -> str:
    return json.dumps(report.to_json())
