"""Naive independent oracles used across the test suite.

Everything here is deliberately dumb: trial division, direct scans, plain
double loops.  No code path is shared with the implementations under test.
"""

from __future__ import annotations

import math
import numpy as np


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def spf_trial(n: int) -> int:
    if n == 1:
        return 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def factorize_trial(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def primes_trial_array(limit: int) -> np.ndarray:
    """Boolean primality over [0, limit] by marking multiples of every
    integer divisor (vectorized trial division)."""
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for d in range(2, math.isqrt(limit) + 1):
        is_p[d * d :: d] = False
    return is_p


def mult_value_trial(rule, n: int):
    v = 1
    for p, e in factorize_trial(n):
        v = v * rule(p, e)
    return v


def mean_trial(rule, X: int):
    return sum(mult_value_trial(rule, n) for n in range(1, X + 1)) / X


def mean_progression_trial(rule, X: int, q: int, a: int):
    a0 = a % q or q
    terms = [mult_value_trial(rule, n) for n in range(a0, X + 1, q)]
    return sum(terms) / len(terms)


def crt_scan_brute(p: int, pp: int, a: int, q: int, qp: int) -> int:
    """Two-stage pure scan: find the residue mod q by brute force, then walk
    the q-progression testing the second congruence directly."""
    r1 = None
    for r in range(q):
        if (p * r - a) % q == 0:
            r1 = r
            break
    assert r1 is not None
    hits = [r1 + k * q for k in range(qp) if (pp * (r1 + k * q) - a) % qp == 0]
    assert len(hits) == 1
    return hits[0]


def crt_full_scan(p: int, pp: int, a: int, q: int, qp: int) -> int:
    hits = [r for r in range(q * qp) if (p * r - a) % q == 0 and (pp * r - a) % qp == 0]
    assert len(hits) == 1
    return hits[0]


def bilinear_sum_brute(p, pp, a, h, Q, primes, alpha=None, beta=None) -> complex:
    """Direct double loop; the inner residue comes from a full scan."""
    import cmath

    total = 0j
    for q in primes:
        for qp in primes:
            if q == qp:
                continue
            r = crt_full_scan(p, pp, a, q, qp)
            aq = 1 if alpha is None else alpha.get(q, 0)
            bq = 1 if beta is None else beta.get(qp, 0)
            total += aq * bq * cmath.exp(-2j * math.pi * h * r / (q * qp))
    return total


def rough_mask_trial(X: int, Y: int, Z: int) -> np.ndarray:
    """n coprime to every prime in [Y, Z), by per-n divisor scans."""
    out = np.ones(X + 1, dtype=bool)
    for n in range(1, X + 1):
        for p in range(Y, Z):
            if is_prime_trial(p) and n % p == 0:
                out[n] = False
                break
    return out
