"""Local densities of the orbit modulo primes and the limiting constants.

``beta`` is the share of orbit states with one coordinate divisible by p and
``g`` the share with two given coordinates divisible by p.  Closed forms are
paired with literal counts over the orbit for cross-checking.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Tuple

import numpy as np

from .core import PackingDescriptor
from .errors import CapacityError, UsageError
from .orbits import orbit_mod
from .primes import is_prime_mr, small_primes

DELTA = 1.30568
MAX_BRUTE_PRIME = 50


def _odd_prime(p: int) -> None:
    if p == 2:
        raise UsageError("p = 2 depends on the coordinate; use beta_two")
    if p < 2 or not is_prime_mr(p):
        raise UsageError(f"{p} is not an odd prime")


def beta_formula(p: int) -> Fraction:
    _odd_prime(p)
    if p == 3:
        return Fraction(2, 5)
    if p % 4 == 1:
        return Fraction(1, p + 1)
    return Fraction(p + 1, p * p + 1)


def beta_two(packing: PackingDescriptor, j: int) -> int:
    """1 if coordinate j (1-based) is even throughout the orbit, else 0."""
    if j not in (1, 2, 3, 4):
        raise UsageError("coordinate index must be 1..4")
    return 1 if packing.root[j - 1] % 2 == 0 else 0


def _brute_orbit(packing, p):
    if p > MAX_BRUTE_PRIME:
        raise CapacityError(f"brute-force densities are limited to p <= {MAX_BRUTE_PRIME}")
    if p < 2 or not is_prime_mr(p):
        raise UsageError(f"{p} is not prime")
    return orbit_mod(packing, p)


def beta_brute(packing: PackingDescriptor, p: int, j: int) -> Fraction:
    if j not in (1, 2, 3, 4):
        raise UsageError("coordinate index must be 1..4")
    orb = _brute_orbit(packing, p)
    hits = int(np.count_nonzero(orb.states[:, j - 1] == 0))
    return Fraction(hits, orb.size)


def g_formula(p: int) -> Fraction:
    if p == 2:
        raise UsageError("g(2) depends on the parity of the two coordinates")
    _odd_prime(p)
    if p == 3:
        return Fraction(1, 10)
    if p % 4 == 1:
        return Fraction(1, (p + 1) ** 2)
    return Fraction(1, p * p + 1)


def g_brute(packing: PackingDescriptor, p: int, i: int, j: int) -> Fraction:
    if i == j or i not in (1, 2, 3, 4) or j not in (1, 2, 3, 4):
        raise UsageError("need two distinct coordinate indices in 1..4")
    orb = _brute_orbit(packing, p)
    hits = int(np.count_nonzero((orb.states[:, i - 1] == 0) & (orb.states[:, j - 1] == 0)))
    return Fraction(hits, orb.size)


def cone_count(p: int, arity: int) -> int:
    """Nonzero zeros of the Descartes form over F_p (arity 4) or with one coordinate 0 (arity 3)."""
    if p <= 3 or not is_prime_mr(p):
        raise UsageError("cone_count needs a prime p > 3")
    if arity == 4:
        return p**3 + p**2 - p - 1 if p % 4 == 1 else p**3 - p**2 + p - 1
    if arity == 3:
        return p * p - 1
    raise UsageError("arity must be 3 or 4")


def cone_count_brute(p: int, arity: int) -> int:
    """Literal count of nonzero solutions of F = 0 over F_p^arity (last coordinate 0 for arity 3)."""
    if arity not in (3, 4):
        raise UsageError("arity must be 3 or 4")
    grids = np.meshgrid(*[np.arange(p, dtype=np.int64)] * arity, indexing="ij")
    v = [g.ravel() for g in grids]
    sq = sum(x * x for x in v)
    lin = sum(v)
    zero = (2 * sq - lin * lin) % p == 0
    return int(np.count_nonzero(zero)) - 1  # drop the origin


def catalan_L2chi4(tolerance: float = 1e-12) -> float:
    """L(2, chi_4) = sum_k (-1)^k / (2k+1)^2 via repeated averaging of partial sums.

    Each averaging pass of the alternating partial sums shrinks the error
    geometrically; iteration stops once successive diagonal entries agree to
    a fraction of ``tolerance``.
    """
    if not tolerance > 0:
        raise UsageError("tolerance must be positive")
    if tolerance < 1e-14:
        raise UsageError("tolerance below 1e-14 is beyond double precision")
    partial = 0.0
    row = []  # row[m] = m-fold average ending at the newest partial sum
    prev = None
    for k in range(400):
        partial += (-1) ** k / (2 * k + 1) ** 2
        new_row = [partial]
        for m in range(len(row)):
            new_row.append(0.5 * (row[m] + new_row[m]))
        row = new_row
        est = row[-1]
        if prev is not None and abs(est - prev) < tolerance / 8:
            return est
        prev = est
    raise ArithmeticError("series acceleration did not converge")


def kissing_constant_c(prime_bound: int = 10**6) -> Tuple[float, float]:
    """2 * prod_{p = 3 mod 4} (1 - 2/(p(p-1)^2)), with an enclosure half-width.

    The product over p <= prime_bound is an upper bound.  Beyond it,
    -log(1 - 2/(p(p-1)^2)) < 3/p^3 and sum_{n > B} 3/n^3 < 3/(2B^2), so the
    limit lies in [upper * exp(-3/(2B^2)), upper].  Returns (midpoint, half-width).
    """
    if prime_bound < 1000:
        raise UsageError("prime_bound must be at least 1000")
    primes = small_primes(prime_bound)
    primes = primes[primes % 4 == 3].astype(np.float64)
    logs = np.log1p(-2.0 / (primes * (primes - 1.0) ** 2))
    upper = 2.0 * math.exp(math.fsum(logs.tolist()))
    lower = upper * math.exp(-3.0 / (2.0 * prime_bound**2))
    return 0.5 * (upper + lower), 0.5 * (upper - lower)


def alpha_constant(prime_bound: int = 10**6, tolerance: float = 1e-12) -> float:
    """Predicted limit of psi2 / (3 N): c * L(2, chi_4)^2 / 3."""
    c, _ = kissing_constant_c(prime_bound)
    return c * catalan_L2chi4(tolerance) ** 2 / 3.0


def constants_json(tolerance: float = 1e-12, prime_bound: int = 10**6) -> dict:
    L = catalan_L2chi4(tolerance)
    c, err = kissing_constant_c(prime_bound)
    return {"L2chi4": L, "c": c, "c_error": err, "alpha": c * L * L / 3.0, "delta": DELTA}
