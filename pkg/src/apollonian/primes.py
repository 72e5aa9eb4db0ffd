"""Primality backends: a packed odd-only segmented sieve and deterministic Miller-Rabin."""

from __future__ import annotations

import math

import numpy as np

# Deterministic for every n below MR_LIMIT, which covers all 64-bit inputs.
MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MR_LIMIT = 318665857834031151167461  # first strong pseudoprime to all twelve bases

_SEGMENT_ODDS = 1 << 22  # multiple of 8 so segments pack to whole bytes


def is_prime_mr(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < MR_LIMIT (in particular all of 64 bits)."""
    if n >= MR_LIMIT:
        raise ValueError("n is beyond the deterministic range of the fixed bases")
    if n < 2:
        return False
    for p in MR_BASES_64:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in MR_BASES_64:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit as int64 (plain Eratosthenes, meant for small limits)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def odd_prime_bits(limit: int) -> np.ndarray:
    """Packed primality table for odd numbers below ``limit``.

    Bit k (little-endian within each byte) is set iff 2k+1 is prime.  Built
    segment by segment so peak memory stays near limit/16 bytes.
    """
    n_odds = max(limit // 2, 1)
    n_odds = (n_odds + 7) // 8 * 8
    out = np.zeros(n_odds // 8, dtype=np.uint8)
    base = small_primes(math.isqrt(2 * n_odds) + 1)[1:]  # odd base primes
    for start in range(0, n_odds, _SEGMENT_ODDS):
        stop = min(start + _SEGMENT_ODDS, n_odds)
        seg = np.ones(stop - start, dtype=bool)
        lo = 2 * start + 1  # value represented by seg[0]
        hi = 2 * stop + 1
        for p in base:
            p = int(p)
            first = p * p
            if first >= hi:
                break
            if first < lo:
                first = lo + (-lo) % p
                if first % 2 == 0:
                    first += p
            seg[(first - lo) // 2 :: p] = False
        if start == 0:
            seg[0] = False  # 1 is not prime
        out[start // 8 : stop // 8] = np.packbits(seg, bitorder="little")
    # odd values at or above limit are cleared so lookups respect the limit
    hi_k = limit // 2
    if hi_k & 7:
        out[hi_k >> 3] &= (1 << (hi_k & 7)) - 1
        out[(hi_k >> 3) + 1:] = 0
    return out


class PrimeTable:
    """Primality lookups below ``limit``, falling back to Miller-Rabin above it."""

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.bits = odd_prime_bits(self.limit)

    def __contains__(self, n: int) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        n = int(n)
        if n < self.limit:
            if n == 2:
                return True
            if n < 2 or n % 2 == 0:
                return False
            k = n >> 1
            return bool((self.bits[k >> 3] >> (k & 7)) & 1)
        return is_prime_mr(n)

    def mask(self, lo: int, hi: int) -> np.ndarray:
        """Boolean array: entry i is True iff lo + i is prime (lo <= n < hi < limit)."""
        if hi > self.limit:
            raise ValueError("mask range exceeds sieve limit")
        flags = np.zeros(max(hi - lo, 0), dtype=bool)
        if hi <= lo:
            return flags
        values = np.arange(lo, hi)
        is_odd = values % 2 == 1
        k = values[is_odd] >> 1
        flags[is_odd] = (self.bits[k >> 3] >> (k & 7).astype(np.uint8)) & 1 == 1
        if lo <= 2 < hi:
            flags[2 - lo] = True
        return flags


def sieve_bytes(limit: int) -> int:
    return (limit + 15) // 16
