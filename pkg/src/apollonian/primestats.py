"""Prime-curvature and kissing-prime statistics of a packing."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import PackingDescriptor
from .enumerate import DEFAULT_MEMORY_BUDGET, MAX_BOUND, WalkResult, walk
from .errors import CapacityError, UsageError
from .primes import PrimeTable, sieve_bytes

CSV_HEADER = "x,N,psi,pi,psi2,ratio_psi,ratio_psi2_over_3N"


@dataclass
class PrimeStatSeries:
    """Cumulative statistics at each checkpoint x (curvatures strictly below x)."""

    checkpoints: List[int]
    N: List[int]
    psi: List[float]
    pi: List[int]
    psi2: List[float]

    @property
    def ratio_psi(self) -> List[float]:
        return [p / n for p, n in zip(self.psi, self.N)]

    @property
    def ratio_psi2(self) -> List[float]:
        return [p / (3 * n) for p, n in zip(self.psi2, self.N)]

    def rows(self):
        for row in zip(self.checkpoints, self.N, self.psi, self.pi, self.psi2,
                       self.ratio_psi, self.ratio_psi2):
            yield row

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for x, n, psi, pi, psi2, r1, r2 in self.rows():
            buf.write(f"{x},{n},{psi:.12g},{pi},{psi2:.12g},{r1:.12g},{r2:.12g}\n")
        return buf.getvalue()


def prime_table_for(bound: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeTable:
    """Sieve up to ``bound`` when it fits the budget, else a small table plus Miller-Rabin."""
    if sieve_bytes(bound) <= memory_budget // 2:
        return PrimeTable(bound)
    return PrimeTable(1 << 16)


def series_from_walk(res: WalkResult) -> PrimeStatSeries:
    n = np.cumsum(res.bin_n)
    pi = np.cumsum(res.bin_pi)
    psi, psi2 = [], []
    for k in range(len(res.edges)):
        psi.append(math.fsum(res.bin_psi[: k + 1].tolist()))
        psi2.append(math.fsum(res.bin_psi2[: k + 1].tolist()))
    return PrimeStatSeries([int(x) for x in res.edges], [int(v) for v in n], psi,
                           [int(v) for v in pi], psi2)


def geometric_checkpoints(x_max: int, count: int, x_min: int = 10) -> List[int]:
    """About ``count`` geometrically spaced integers from x_min to x_max (both kept)."""
    if count < 2:
        raise UsageError("need at least two checkpoints")
    if not 2 <= x_min < x_max:
        raise UsageError("need 2 <= x_min < x_max")
    ratio = (x_max / x_min) ** (1.0 / (count - 1))
    pts = sorted({int(round(x_min * ratio**k)) for k in range(count - 1)} | {x_max})
    return [p for p in pts if p <= x_max]


def prime_walk(packing: PackingDescriptor, checkpoints: Sequence[int], *, threads: int = 1,
               primes: Optional[PrimeTable] = None, hist_range=None,
               memory_budget: int = DEFAULT_MEMORY_BUDGET) -> WalkResult:
    bound = int(checkpoints[-1])
    if bound > MAX_BOUND:
        raise CapacityError(f"x = {bound} exceeds the 2**31 traversal cap")
    if primes is None:
        primes = prime_table_for(bound, memory_budget)
    return walk(packing, bound, edges=checkpoints, primes=primes, threads=threads,
                hist_range=hist_range, memory_budget=memory_budget)


def ratio_series(packing: PackingDescriptor, x_max: int, checkpoint_count: int, *,
                 x_min: Optional[int] = None, threads: int = 1,
                 memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeStatSeries:
    """One walk up to ``x_max`` sampling N, psi, pi and psi2 at geometric checkpoints."""
    if x_min is None:
        x_min = min(max(10, max(packing.root) + 1), x_max - 1)
    pts = geometric_checkpoints(x_max, checkpoint_count, x_min)
    return series_from_walk(prime_walk(packing, pts, threads=threads, memory_budget=memory_budget))


def _single(packing, x, threads):
    if x < 2:
        raise UsageError("x must be >= 2")
    return series_from_walk(prime_walk(packing, [x], threads=threads))


def psi(packing: PackingDescriptor, x: int, *, threads: int = 1) -> float:
    """Sum of log a over circles of prime curvature a < x, with multiplicity."""
    return _single(packing, x, threads).psi[-1]


def pi_count(packing: PackingDescriptor, x: int, *, threads: int = 1) -> int:
    return _single(packing, x, threads).pi[-1]


def psi2(packing: PackingDescriptor, x: int, *, threads: int = 1) -> float:
    """Sum of log a * log b over unordered tangent pairs of prime curvatures below x."""
    return _single(packing, x, threads).psi2[-1]
