"""Segmented smallest-prime-factor sieving and window factorization.

All arithmetic in this module is exact integer arithmetic.  A window
[lo, hi) is sieved into an immutable table of smallest prime factors;
factorization, prime enumeration and range-restricted divisor counts
are derived from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

DEFAULT_SEGMENT = 1 << 20
MAX_WINDOW_END = 1 << 40


class WindowError(ValueError):
    """Raised for invalid sieve windows or out-of-window lookups."""


def _check_window(lo: int, hi: int) -> None:
    if lo < 1:
        raise WindowError(f"window start must be >= 1, got {lo}")
    if hi <= lo:
        raise WindowError(f"window must satisfy lo < hi, got [{lo}, {hi})")
    if hi > MAX_WINDOW_END:
        raise WindowError(f"window end {hi} exceeds the supported bound 2**40")


def small_primes(limit: int) -> np.ndarray:
    """Primes < limit by a plain boolean Eratosthenes sieve (limit <= ~10**8)."""
    if limit <= 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""

    factors: Tuple[Tuple[int, int], ...]

    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    def distinct_primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@dataclass(frozen=True)
class SpfTable:
    """Smallest prime factors for the integers in [lo, hi).

    spf[k] is the smallest prime factor of lo + k; the entry for n = 1 is
    the sentinel 1.  The table is immutable after construction.
    """

    lo: int
    hi: int
    spf: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.spf.setflags(write=False)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n < self.hi

    def spf_of(self, n: int) -> int:
        if n not in self:
            raise WindowError(f"{n} outside table window [{self.lo}, {self.hi})")
        return int(self.spf[n - self.lo])

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi


def build_spf(lo: int, hi: int, segment_length: int = DEFAULT_SEGMENT) -> SpfTable:
    """Sieve smallest prime factors over [lo, hi).

    The window is processed in segments of `segment_length` entries so the
    base-prime work stays cache friendly; the result is a single table for
    the full window.
    """
    _check_window(lo, hi)
    base = small_primes(math.isqrt(hi - 1) + 1)
    use_32 = hi <= np.iinfo(np.int32).max
    spf = np.zeros(hi - lo, dtype=np.int32 if use_32 else np.int64)

    for seg_lo in range(lo, hi, segment_length):
        seg_hi = min(seg_lo + segment_length, hi)
        seg = spf[seg_lo - lo : seg_hi - lo]
        for p in base:
            p = int(p)
            start = max(p, ((seg_lo + p - 1) // p) * p)
            if start >= seg_hi:
                continue
            view = seg[start - seg_lo :: p]
            unset = view == 0
            view[unset] = p
        # survivors are 1 or primes above the base limit: spf(n) = n
        idx = np.flatnonzero(seg == 0)
        seg[idx] = idx + seg_lo
    return SpfTable(lo=lo, hi=hi, spf=spf)


def primes_in(lo: int, hi: int, segment_length: int = DEFAULT_SEGMENT) -> List[int]:
    """All primes in [lo, hi), ascending."""
    _check_window(lo, hi)
    base = small_primes(math.isqrt(hi - 1) + 1)
    out: List[int] = []
    for seg_lo in range(lo, hi, segment_length):
        seg_hi = min(seg_lo + segment_length, hi)
        is_prime = np.ones(seg_hi - seg_lo, dtype=bool)
        if seg_lo <= 1:
            is_prime[: 2 - seg_lo] = False
        for p in base:
            p = int(p)
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start < seg_hi:
                is_prime[start - seg_lo :: p] = False
        out.extend((np.flatnonzero(is_prime) + seg_lo).tolist())
    return out


def factorize(n: int, table: SpfTable) -> Factorization:
    """Factor n using the table; cofactors that leave the window fall back
    to trial division, so any n in the window factors completely."""
    if n not in table:
        raise WindowError(f"{n} outside table window [{table.lo}, {table.hi})")
    if n < 1:
        raise WindowError(f"n must be >= 1, got {n}")
    factors: List[Tuple[int, int]] = []
    m = n
    while m > 1:
        p = table.spf_of(m) if m in table else _smallest_factor(m)
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    factors.sort()
    return Factorization(tuple(factors))


def _smallest_factor(m: int) -> int:
    if m % 2 == 0:
        return 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return d
        d += 2
    return m


def omega_in_range(n: int, Y: int, Z: int, table: SpfTable) -> int:
    """Number of distinct primes p with Y <= p < Z dividing n."""
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    fac = factorize(n, table)
    return sum(1 for p in fac.distinct_primes() if Y <= p < Z)


def mu2_range(n: int, Y: int, Z: int, table: SpfTable) -> int:
    """1 if no prime p in [Y, Z) has p**2 | n, else 0."""
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    fac = factorize(n, table)
    for p, e in fac.factors:
        if Y <= p < Z and e >= 2:
            return 0
    return 1


def omega_range_array(X: int, Y: int, Z: int) -> np.ndarray:
    """Vectorized omega_in_range over [0, X]: counts by divisibility slicing.

    Independent of the factorization chase, which makes it usable as a
    cross-check oracle as well as a bulk evaluator.
    """
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    counts = np.zeros(X + 1, dtype=np.int16)
    for p in primes_in(Y, Z):
        counts[p::p] += 1
    return counts


def mu2_range_array(X: int, Y: int, Z: int) -> np.ndarray:
    """Vectorized mu2_range over [0, X]."""
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    ok = np.ones(X + 1, dtype=bool)
    for p in primes_in(Y, Z):
        ok[p * p :: p * p] = False
    return ok
