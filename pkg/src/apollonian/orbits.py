"""Orbits of the Apollonian group on residue quadruples modulo d."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .core import PackingDescriptor
from .errors import CapacityError, UsageError

MAX_MODULUS = 10_000
MAX_STATES = 5_000_000

# S_i as integer matrices acting on column vectors
GENERATORS = np.array([
    [[-1, 2, 2, 2], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [2, -1, 2, 2], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [2, 2, -1, 2], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [2, 2, 2, -1]],
], dtype=np.int64)


@dataclass
class OrbitModD:
    """Residue quadruples reachable from the root modulo ``modulus``.

    ``states`` is sorted lexicographically; ``edges[k, i]`` is the row of the
    state reached from state ``k`` by generator ``i + 1``.
    """

    modulus: int
    states: np.ndarray
    edges: np.ndarray

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def as_set(self) -> set:
        return {tuple(int(v) for v in row) for row in self.states}


@dataclass
class ResidueProfile:
    gamma: Dict[int, Fraction]
    admissible: List[int] = field(default_factory=list)


def _encode(states: np.ndarray, d: int) -> np.ndarray:
    return ((states[:, 0] * d + states[:, 1]) * d + states[:, 2]) * d + states[:, 3]


def _decode(codes: np.ndarray, d: int) -> np.ndarray:
    out = np.empty((len(codes), 4), dtype=np.int64)
    c = codes.copy()
    for j in range(3, -1, -1):
        out[:, j] = c % d
        c //= d
    return out


def _apply_all(states: np.ndarray, d: int) -> np.ndarray:
    """Images of every state under each generator, shape (4, n, 4)."""
    return np.stack([(states @ GENERATORS[i].T) % d for i in range(4)])


@lru_cache(maxsize=64)
def _orbit_cached(root: Tuple[int, ...], d: int, max_states: int) -> OrbitModD:
    start = np.array([[v % d for v in root]], dtype=np.int64)
    seen = _encode(start, d)
    frontier = start
    while len(frontier):
        images = _apply_all(frontier, d).reshape(-1, 4)
        codes = np.unique(_encode(images, d))
        new = np.setdiff1d(codes, seen, assume_unique=True)
        if len(new) == 0:
            break
        seen = np.union1d(seen, new)
        if len(seen) > max_states:
            raise CapacityError(f"orbit modulo {d} exceeds {max_states} states")
        frontier = _decode(new, d)
    states = _decode(seen, d)
    images = _apply_all(states, d)
    edges = np.stack([np.searchsorted(seen, _encode(images[i], d)) for i in range(4)], axis=1)
    states.setflags(write=False)
    edges.setflags(write=False)
    return OrbitModD(d, states, edges)


def orbit_mod(packing: PackingDescriptor, d: int, *, max_states: int = MAX_STATES) -> OrbitModD:
    """Breadth-first closure of the root quadruple mod ``d`` under S_1..S_4."""
    if d < 2:
        raise UsageError("modulus must be >= 2")
    if d > MAX_MODULUS:
        raise CapacityError(f"modulus {d} exceeds {MAX_MODULUS}")
    return _orbit_cached(tuple(packing.root), int(d), int(max_states))


def gamma_profile(packing: PackingDescriptor) -> ResidueProfile:
    """Share of orbit-mod-24 coordinates equal to each residue, as exact fractions."""
    orb = orbit_mod(packing, 24)
    counts = np.bincount(orb.states.ravel(), minlength=24)
    total = 4 * orb.size
    gamma = {n: Fraction(int(counts[n]), total) for n in range(24)}
    return ResidueProfile(gamma, [n for n in range(24) if gamma[n] > 0])


def admissible_residues(packing: PackingDescriptor) -> List[int]:
    return gamma_profile(packing).admissible


@dataclass
class ProductReport:
    d1: int
    d2: int
    size: int
    size1: int
    size2: int
    missing1: List[tuple]
    missing2: List[tuple]

    @property
    def passed(self) -> bool:
        return self.size == self.size1 * self.size2 and not self.missing1 and not self.missing2


def verify_product_structure(packing: PackingDescriptor, d1: int, d2: int) -> ProductReport:
    """Check |O_{d1 d2}| = |O_d1| |O_d2| and that reduction onto each factor is onto."""
    if d1 < 1 or d2 < 1 or math.gcd(d1, d2) != 1:
        raise UsageError("moduli must be positive and coprime")
    if d1 * d2 > MAX_MODULUS:
        raise CapacityError(f"product modulus {d1 * d2} exceeds {MAX_MODULUS}")
    if d1 == 1 or d2 == 1:
        d = d1 * d2
        n = orbit_mod(packing, d).size if d > 1 else 1
        return ProductReport(d1, d2, n, n if d1 > 1 else 1, n if d2 > 1 else 1, [], [])
    big = orbit_mod(packing, d1 * d2)
    o1, o2 = orbit_mod(packing, d1), orbit_mod(packing, d2)
    missing = []
    for small in (o1, o2):
        proj = {tuple(int(v) for v in row) for row in np.unique(big.states % small.modulus, axis=0)}
        missing.append(sorted(small.as_set() - proj))
    return ProductReport(d1, d2, big.size, o1.size, o2.size, missing[0], missing[1])


def orbit_json(packing: PackingDescriptor, d: int) -> dict:
    orb = orbit_mod(packing, d)
    prof = gamma_profile(packing)
    return {
        "modulus": d,
        "size": orb.size,
        "states": orb.states.tolist(),
        "gamma": {str(n): f"{g.numerator}/{g.denominator}" for n, g in prof.gamma.items() if g},
        "admissible": prof.admissible,
    }
