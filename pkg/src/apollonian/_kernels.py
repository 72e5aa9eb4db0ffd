"""Compiled inner loops for the quadruple-tree walk.

Everything here works on plain numpy arrays so the functions can run with the
GIL released; the Python wrappers in ``enumerate`` own validation and merging.
"""

import math

import numpy as np
from numba import njit

ERR_NONE = 0
ERR_NOT_INCREASING = 1
ERR_NOT_DESCARTES = 2
ERR_IMPRIMITIVE = 3


@njit(cache=True, nogil=True)
def _mulmod(a, b, m):
    return (a * b) % m


@njit(cache=True, nogil=True)
def _powmod(a, e, m):
    r = np.uint64(1)
    a = a % m
    while e > 0:
        if e & np.uint64(1):
            r = _mulmod(r, a, m)
        a = _mulmod(a, a, m)
        e >>= np.uint64(1)
    return r


@njit(cache=True, nogil=True)
def miller_rabin_u32(n):
    """Deterministic for n < 4_759_123_141 (bases 2, 7, 61); callers keep n < 2**32."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in (3, 5, 7, 11, 13, 61):
        if n % p == 0:
            return n == p
    un = np.uint64(n)
    d = un - np.uint64(1)
    r = 0
    while d % np.uint64(2) == 0:
        d //= np.uint64(2)
        r += 1
    for a in (2, 7, 61):
        x = _powmod(np.uint64(a), d, un)
        if x == 1 or x == un - np.uint64(1):
            continue
        composite = True
        for _ in range(r - 1):
            x = _mulmod(x, x, un)
            if x == un - np.uint64(1):
                composite = False
                break
        if composite:
            return False
    return True


@njit(cache=True, nogil=True)
def is_prime_lookup(n, bits, limit):
    if n < limit:
        if n == 2:
            return True
        if n < 2 or (n & 1) == 0:
            return False
        k = n >> 1
        return ((bits[k >> 3] >> (k & 7)) & 1) == 1
    return miller_rabin_u32(n)


@njit(cache=True, nogil=True)
def classify_range(lo, hi, bits, limit, use_mr):
    out = np.zeros(hi - lo, dtype=np.bool_)
    for n in range(lo, hi):
        if use_mr:
            out[n - lo] = miller_rabin_u32(n)
        else:
            out[n - lo] = is_prime_lookup(n, bits, limit)
    return out


@njit(cache=True, nogil=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _kahan_add(s, c, j, x):
    y = x - c[j]
    t = s[j] + y
    c[j] = (t - s[j]) - y
    s[j] = t


@njit(cache=True, nogil=True)
def walk(tasks, expand, bound, hist, hist_lo, bits, sieve_limit, stats, edges,
         bin_n, bin_pi, bin_psi, bin_psi_c, bin_psi2, bin_psi2_c, coord, check, errq):
    """Visit every node in ``tasks`` (rows: v1..v4, generator index 0..3).

    With ``expand`` the subtrees below each task are walked as well, pushing a
    child only when its new curvature is below ``bound``.  Accumulators are
    updated in place.  Returns (visits, error code); on error ``errq`` holds
    the offending quadruple and generator.
    """
    cap = 1 << 12
    ntask = tasks.shape[0]
    if ntask + 4 > cap:
        cap = ntask + 4
    st = np.empty((cap, 5), dtype=np.int64)
    for t in range(ntask):
        for j in range(5):
            st[t, j] = tasks[ntask - 1 - t, j]
    sp = ntask
    visits = 0
    hist_n = hist.shape[0]
    nedges = edges.shape[0]
    q = np.empty(4, dtype=np.int64)
    while sp > 0:
        sp -= 1
        for j in range(4):
            q[j] = st[sp, j]
        g = st[sp, 4]
        n = q[g]
        visits += 1
        coord[g] += 1

        if check:
            s2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]
            s1 = q[0] + q[1] + q[2] + q[3]
            if 2 * s2 != s1 * s1 or _gcd(_gcd(q[0], q[1]), _gcd(q[2], q[3])) != 1:
                for j in range(4):
                    errq[j] = q[j]
                errq[4] = g
                if 2 * s2 != s1 * s1:
                    return visits, ERR_NOT_DESCARTES
                return visits, ERR_IMPRIMITIVE

        k = n - hist_lo
        if k >= 0 and k < hist_n:
            hist[k] += 1

        b = 0
        if nedges > 1:
            lo_i = 0
            hi_i = nedges - 1
            while lo_i < hi_i:
                mid = (lo_i + hi_i) >> 1
                if edges[mid] > n:
                    hi_i = mid
                else:
                    lo_i = mid + 1
            b = lo_i
        bin_n[b] += 1
        if stats:
            if is_prime_lookup(n, bits, sieve_limit):
                ln = math.log(n)
                bin_pi[b] += 1
                _kahan_add(bin_psi, bin_psi_c, b, ln)
                for j in range(4):
                    if j != g and q[j] > 1 and is_prime_lookup(q[j], bits, sieve_limit):
                        _kahan_add(bin_psi2, bin_psi2_c, b, ln * math.log(q[j]))

        if not expand:
            continue
        if sp + 3 >= cap:
            grown = np.empty((cap * 2, 5), dtype=np.int64)
            grown[:cap] = st
            st = grown
            cap *= 2
        s = q[0] + q[1] + q[2] + q[3]
        for i in range(4):
            if i == g:
                continue
            old = q[i]
            m = 2 * (s - old) - old
            if m <= old:
                for j in range(4):
                    errq[j] = q[j]
                errq[4] = g
                return visits, ERR_NOT_INCREASING
            if m < bound:
                for j in range(4):
                    st[sp, j] = q[j]
                st[sp, i] = m
                st[sp, 4] = i
                sp += 1
    return visits, ERR_NONE
