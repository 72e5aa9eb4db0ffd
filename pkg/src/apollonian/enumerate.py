"""Pruned depth-first enumeration of the quadruple tree of a bounded packing.

Every circle other than the four root circles is created exactly once, by
one generator applied to its parent quadruple; the new coordinate is the
maximum of the child.  Children are pushed only while that new curvature is
below the bound, so the walk touches exactly the circles of curvature < bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .core import PackingDescriptor, Quadruple
from .errors import CapacityError, CurvatureOverflowError, TraversalInvariantError, UsageError

MAX_BOUND = 1 << 31
DEFAULT_MEMORY_BUDGET = 2 << 30
_TASKS_PER_WORKER = 16


@dataclass(frozen=True)
class TraversalConfig:
    """Bound (strict) for the walk plus an optional recorded interval."""

    bound: int
    record_lo: Optional[int] = None
    record_hi: Optional[int] = None

    def __post_init__(self):
        if self.bound <= 0:
            raise UsageError("bound must be positive")
        if self.bound > MAX_BOUND:
            raise CapacityError(f"bound {self.bound} exceeds the 2**31 traversal cap")
        if (self.record_lo is None) != (self.record_hi is None):
            raise UsageError("record_lo and record_hi go together")
        if self.record_lo is not None and not 0 < self.record_lo < self.record_hi <= self.bound:
            raise UsageError("need 0 < record_lo < record_hi <= bound")


@dataclass(frozen=True)
class NodeVisit:
    quadruple: Quadruple
    generator_used: int  # 1..4
    new_curvature: int
    is_root_child: bool


@dataclass
class CurvatureHistogram:
    """Exact multiplicities of curvatures n with lo <= n < hi."""

    lo: int
    hi: int
    counts: np.ndarray
    root: Quadruple

    @property
    def bounding_curvature(self) -> int:
        return self.root[0]

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(f"curvature {n} outside [{self.lo}, {self.hi})")
        return int(self.counts[n - self.lo])

    def total(self) -> int:
        return int(self.counts.sum(dtype=np.int64))

    def as_dict(self) -> dict:
        nz = np.flatnonzero(self.counts)
        return {int(i) + self.lo: int(self.counts[i]) for i in nz}


@dataclass
class WalkResult:
    """Merged accumulators of one bounded walk, root circles included."""

    bound: int
    visits: int
    coord: np.ndarray
    hist: Optional[np.ndarray] = None
    edges: Optional[np.ndarray] = None
    bin_n: Optional[np.ndarray] = None
    bin_pi: Optional[np.ndarray] = None
    bin_psi: Optional[np.ndarray] = None
    bin_psi2: Optional[np.ndarray] = None
    _parts: list = field(default_factory=list, repr=False)

    @property
    def circle_count(self) -> int:
        return int(self.bin_n.sum())


def _child(q, i: int) -> Quadruple:
    s = q[0] + q[1] + q[2] + q[3]
    out = list(q)
    out[i] = 2 * (s - q[i]) - q[i]
    return Quadruple(*out)


def root_children(root: Sequence[int], bound: int) -> List[Tuple[Quadruple, int]]:
    """Children of the root under all four generators, with 0-based generator index."""
    out = []
    for i in range(4):
        c = _child(root, i)
        if c[i] < bound:
            out.append((c, i))
    return out


def _children(q: Quadruple, g: int, bound: int) -> List[Tuple[Quadruple, int]]:
    out = []
    for i in range(4):
        if i == g:
            continue
        c = _child(q, i)
        if c[i] <= q[i]:
            raise TraversalInvariantError(
                f"generator S{i + 1} does not increase curvature at {tuple(q)}")
        if c[i] < bound:
            out.append((c, i))
    return out


def traverse(packing: PackingDescriptor, config: TraversalConfig,
             visitor: Callable[[NodeVisit], None]) -> int:
    """Walk the tree with an explicit LIFO stack, calling ``visitor`` per circle.

    Pure Python; meant for small bounds and for consumers (rendering, tests)
    that need to see each node.  With a record interval, the walk is pruned at
    record_hi and ``visitor`` only sees circles with curvature >= record_lo.
    Returns the number of visits.
    """
    bound = config.record_hi if config.record_hi is not None else config.bound
    lo = config.record_lo if config.record_lo is not None else 0
    stack = [(q, g, True) for q, g in reversed(root_children(packing.root, bound))]
    visits = 0
    while stack:
        q, g, at_root = stack.pop()
        visits += 1
        if q[g] >= lo:
            visitor(NodeVisit(q, g + 1, q[g], at_root))
        for c, i in reversed(_children(q, g, bound)):
            stack.append((c, i, False))
    return visits


def recursive_histogram(packing: PackingDescriptor, lo: int, hi: int) -> CurvatureHistogram:
    """Independent recursive enumerator (no explicit stack); oracle for small ``hi``."""
    counts = [0] * (hi - lo)

    def record(n):
        if lo <= n < hi:
            counts[n - lo] += 1

    def descend(q, g):
        record(q[g])
        s = sum(q)
        for i in range(4):
            if i != g:
                new = 2 * (s - q[i]) - q[i]
                if new < hi:
                    child = q[:i] + (new,) + q[i + 1:]
                    descend(child, i)

    root = tuple(packing.root)
    for v in root:
        if v > 0:
            record(v)
    s = sum(root)
    for i in range(4):
        new = 2 * (s - root[i]) - root[i]
        if new < hi:
            descend(root[:i] + (new,) + root[i + 1:], i)
    return CurvatureHistogram(lo, hi, np.asarray(counts, dtype=np.uint32), packing.root)


def _split_frontier(root: Quadruple, bound: int, want: int):
    """Breadth-first expansion until at least ``want`` subtree roots are available."""
    interior: List[Tuple[Quadruple, int]] = []
    frontier = root_children(root, bound)
    while 0 < len(frontier) < want:
        nxt = []
        for q, g in frontier:
            interior.append((q, g))
            nxt.extend(_children(q, g, bound))
        frontier = nxt
    return interior, frontier


def _as_tasks(nodes) -> np.ndarray:
    arr = np.empty((len(nodes), 5), dtype=np.int64)
    for r, (q, g) in enumerate(nodes):
        if max(abs(v) for v in q) >= MAX_BOUND:
            raise CurvatureOverflowError(f"quadruple {tuple(q)} is outside the supported range")
        arr[r, :4] = q
        arr[r, 4] = g
    return arr


_EMPTY_U8 = np.zeros(1, dtype=np.uint8)
_ERR_TEXT = {
    _kernels.ERR_NOT_INCREASING: "a generator failed to increase the curvature",
    _kernels.ERR_NOT_DESCARTES: "a quadruple violates the Descartes equation",
    _kernels.ERR_IMPRIMITIVE: "a quadruple is not primitive",
}


class _Accumulator:
    def __init__(self, nbins, hist_len):
        self.coord = np.zeros(4, dtype=np.int64)
        self.hist = np.zeros(hist_len, dtype=np.uint32)
        self.bin_n = np.zeros(nbins, dtype=np.int64)
        self.bin_pi = np.zeros(nbins, dtype=np.int64)
        self.bin_psi = np.zeros(nbins)
        self.bin_psi_c = np.zeros(nbins)
        self.bin_psi2 = np.zeros(nbins)
        self.bin_psi2_c = np.zeros(nbins)
        self.errq = np.zeros(5, dtype=np.int64)
        self.visits = 0

    def run(self, tasks, expand, bound, hist_lo, bits, limit, stats, edges, check):
        if tasks.shape[0] == 0:
            return
        visits, err = _kernels.walk(
            tasks, expand, bound, self.hist, hist_lo, bits, limit, stats, edges,
            self.bin_n, self.bin_pi, self.bin_psi, self.bin_psi_c,
            self.bin_psi2, self.bin_psi2_c, self.coord, check, self.errq)
        self.visits += visits
        if err != _kernels.ERR_NONE:
            q = tuple(int(v) for v in self.errq[:4])
            raise TraversalInvariantError(f"{_ERR_TEXT[err]}: {q} (generator S{self.errq[4] + 1})")


def check_memory(nbytes: int, memory_budget: int, what: str) -> None:
    if nbytes > memory_budget:
        raise CapacityError(
            f"{what} needs {nbytes} bytes, over the {memory_budget}-byte budget; "
            "split the interval into chunks")


def walk(packing: PackingDescriptor, bound: int, *, hist_range: Optional[Tuple[int, int]] = None,
         edges: Optional[Sequence[int]] = None, primes=None, threads: int = 1,
         check: bool = False, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> WalkResult:
    """Single bounded walk accumulating any combination of outputs.

    ``hist_range`` selects the recorded curvature interval; ``edges`` (ascending,
    last == bound) selects the checkpoints for counts and prime statistics,
    which are only gathered when ``primes`` (a PrimeTable) is supplied.
    Work is split into subtrees, spread over ``threads`` workers with private
    accumulators, and merged in a fixed order.
    """
    TraversalConfig(bound)
    threads = max(1, int(threads))
    root = packing.root
    stats = primes is not None
    edges_arr = np.asarray([bound] if edges is None else list(edges), dtype=np.int64)
    if edges_arr[-1] != bound or np.any(np.diff(edges_arr) <= 0):
        raise UsageError("checkpoints must be strictly ascending and end at the bound")
    if hist_range is None:
        hist_lo, hist_len = 0, 0
    else:
        hist_lo, hist_hi = hist_range
        if not 1 <= hist_lo < hist_hi <= bound:
            raise UsageError("histogram interval must satisfy 1 <= lo < hi <= bound")
        hist_len = hist_hi - hist_lo
    nbytes = hist_len * 4 * threads
    if stats:
        if primes.limit < bound and bound > 1 << 32:
            raise CapacityError("prime lookups above 2**32 are not supported in the walk")
        nbytes += primes.bits.nbytes
    check_memory(nbytes, memory_budget, "the walk")
    bits = primes.bits if stats else _EMPTY_U8
    limit = primes.limit if stats else 0
    nbins = len(edges_arr)

    main = _Accumulator(nbins, hist_len)
    _add_root_circles(main, root, bound, hist_lo, hist_len, edges_arr, primes)
    if threads == 1:
        main.run(_as_tasks(root_children(root, bound)), True, bound, hist_lo, bits, limit,
                 stats, edges_arr, check)
        workers = []
    else:
        interior, frontier = _split_frontier(root, bound, threads * _TASKS_PER_WORKER)
        main.run(_as_tasks(interior), False, bound, hist_lo, bits, limit, stats, edges_arr, check)
        workers = [_Accumulator(nbins, hist_len) for _ in range(threads)]
        chunks = [_as_tasks(frontier[w::threads]) for w in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(acc.run, chunk, True, bound, hist_lo, bits, limit, stats,
                                   edges_arr, check) for acc, chunk in zip(workers, chunks)]
            for f in futures:
                f.result()

    parts = [main] + workers
    res = WalkResult(bound=bound, visits=sum(p.visits for p in parts),
                     coord=sum((p.coord for p in parts), np.zeros(4, dtype=np.int64)),
                     edges=edges_arr)
    res.bin_n = sum((p.bin_n for p in parts), np.zeros(nbins, dtype=np.int64))
    if hist_len:
        hist = main.hist
        for p in workers:
            hist += p.hist
        res.hist = hist
    if stats:
        res.bin_pi = sum((p.bin_pi for p in parts), np.zeros(nbins, dtype=np.int64))
        res.bin_psi = np.array([math.fsum(p.bin_psi[b] - p.bin_psi_c[b] for p in parts)
                                for b in range(nbins)])
        res.bin_psi2 = np.array([math.fsum(p.bin_psi2[b] - p.bin_psi2_c[b] for p in parts)
                                 for b in range(nbins)])
    return res


def _bin_of(edges: np.ndarray, n: int) -> int:
    return int(np.searchsorted(edges, n, side="right"))


def _add_root_circles(acc: _Accumulator, root, bound, hist_lo, hist_len, edges, primes):
    for i, v in enumerate(root):
        if v >= bound:
            continue
        acc.bin_n[_bin_of(edges, v)] += 1
        if v > 0:
            acc.coord[i] += 1
            if 0 <= v - hist_lo < hist_len:
                acc.hist[v - hist_lo] += 1
            if primes is not None and primes.is_prime(v):
                b = _bin_of(edges, v)
                acc.bin_pi[b] += 1
                acc.bin_psi[b] += math.log(v)
    if primes is not None:
        for i in range(4):
            for j in range(i + 1, 4):
                a, b = root[i], root[j]
                if a < bound and b < bound and primes.is_prime(a) and primes.is_prime(b):
                    acc.bin_psi2[_bin_of(edges, max(a, b))] += math.log(a) * math.log(b)


def count_circles(packing: PackingDescriptor, x: int, *, threads: int = 1) -> int:
    """N_P(x): circles of curvature < x with multiplicity, bounding circle included."""
    if x < 1:
        raise UsageError("x must be >= 1")
    return walk(packing, x, threads=threads).circle_count


def histogram(packing: PackingDescriptor, lo: int, hi: int, *, threads: int = 1,
              memory_budget: int = DEFAULT_MEMORY_BUDGET, check: bool = False) -> CurvatureHistogram:
    """Exact multiplicities for curvatures in [lo, hi), walking with bound hi."""
    if not 1 <= lo < hi:
        raise UsageError("histogram interval must satisfy 1 <= lo < hi")
    check_memory((hi - lo) * 4 * max(1, threads), memory_budget, f"histogram [{lo}, {hi})")
    res = walk(packing, hi, hist_range=(lo, hi), threads=threads, check=check,
               memory_budget=memory_budget)
    return CurvatureHistogram(lo, hi, res.hist, packing.root)


def per_coordinate_counts(packing: PackingDescriptor, x: int, *, threads: int = 1) -> Tuple[int, int, int, int]:
    """Circles of curvature < x attributed to the coordinate that created them.

    Root circles count for their own coordinate; the bounding circle is left
    out, so the four counts add up to N_P(x) - 1.
    """
    if x < 1:
        raise UsageError("x must be >= 1")
    res = walk(packing, x, threads=threads)
    return tuple(int(c) for c in res.coord)


def count_tangent_pairs(packing: PackingDescriptor, x: int, *, threads: int = 1) -> int:
    """Unordered tangent pairs with both curvatures < x: 6 root pairs + 3 per new circle."""
    if x <= max(packing.root):
        raise UsageError("x must exceed the largest root curvature")
    return 6 + 3 * walk(packing, x, threads=threads).visits
