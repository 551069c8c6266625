"""Bounded multiplicative functions |f(n)| <= 1 and their bulk evaluation.

A function is specified by its values on prime powers; evaluation over a
window multiplies those values along the factorization.  Built-ins cover
the Mobius and Liouville functions, the constant 1, the parity-biased
squarefree indicator and a seeded random +-1-on-primes function.

The random sign generator is SplitMix64 keyed by (seed, p): named, seeded
and splittable, so value tables are reproducible and order independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple, Union

import numpy as np

from .sieve import SpfTable, WindowError, factorize, small_primes

BUILTIN_NAMES = ("mobius", "liouville", "one", "parity_squarefree", "random_pm1")

_MASK64 = (1 << 64) - 1


def _splitmix64_scalar(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _splitmix64_array(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _pm1_scalar(seed: int, p: int) -> int:
    h = _splitmix64_scalar(p ^ _splitmix64_scalar(seed))
    return 1 if h & 1 else -1


def _pm1_array(seed: int, p: np.ndarray) -> np.ndarray:
    key = np.uint64(_splitmix64_scalar(seed))
    h = _splitmix64_array(p.astype(np.uint64) ^ key)
    return np.where(h & np.uint64(1), 1, -1).astype(np.int8)


@dataclass(frozen=True)
class MultiplicativeSpec:
    """A bounded multiplicative function given by its prime-power rule.

    rule(p, e) is the value on p**e; f(n) is the product over the
    factorization and f(1) = 1.  integer_valued marks rules whose range
    is {-1, 0, 1}, letting bulk evaluation stay in exact int8.
    prime_vector, when present, vectorizes rule(p, 1) over prime arrays.
    """

    name: str
    rule: Callable[[int, int], complex]
    integer_valued: bool = False
    seed: Optional[int] = None
    prime_vector: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def rule_checked(self, p: int, e: int):
        v = self.rule(p, e)
        if abs(v) > 1 + 1e-12:
            raise ValueError(
                f"{self.name}: |rule({p},{e})| = {abs(v):.6g} exceeds the bound 1"
            )
        return v

    def primes_vectorized(self, p: np.ndarray) -> np.ndarray:
        if self.prime_vector is not None:
            return self.prime_vector(p)
        dt = np.int8 if self.integer_valued else np.complex128
        return np.array([self.rule_checked(int(q), 1) for q in p], dtype=dt)


def builtin(name: str, seed: int = 0) -> MultiplicativeSpec:
    """One of the built-in functions; `seed` only matters for random_pm1."""
    if name == "mobius":
        return MultiplicativeSpec(
            name="mobius",
            rule=lambda p, e: -1 if e == 1 else 0,
            integer_valued=True,
            prime_vector=lambda p: np.full(len(p), -1, dtype=np.int8),
        )
    if name == "liouville":
        return MultiplicativeSpec(
            name="liouville",
            rule=lambda p, e: (-1) ** e,
            integer_valued=True,
            prime_vector=lambda p: np.full(len(p), -1, dtype=np.int8),
        )
    if name == "one":
        return MultiplicativeSpec(
            name="one",
            rule=lambda p, e: 1,
            integer_valued=True,
            prime_vector=lambda p: np.ones(len(p), dtype=np.int8),
        )
    if name == "parity_squarefree":
        # multiplicative normalization (-1)**(n+1) * mu(n)**2: -1 at p=2,
        # +1 at odd primes, 0 on higher prime powers
        return MultiplicativeSpec(
            name="parity_squarefree",
            rule=lambda p, e: 0 if e >= 2 else (-1 if p == 2 else 1),
            integer_valued=True,
            prime_vector=lambda p: np.where(p == 2, -1, 1).astype(np.int8),
        )
    if name == "random_pm1":
        return MultiplicativeSpec(
            name="random_pm1",
            rule=lambda p, e, s=seed: _pm1_scalar(s, p) if e == 1 else 0,
            integer_valued=True,
            seed=seed,
            prime_vector=lambda p, s=seed: _pm1_array(s, p),
        )
    raise ValueError(f"unknown builtin {name!r}; choose from {BUILTIN_NAMES}")


@dataclass(frozen=True)
class ValueTable:
    """f(n) for 1 <= n <= X; values[n] indexed directly by n, values[0] = 0."""

    X: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)


def eval_value(f: MultiplicativeSpec, n: int, table: SpfTable):
    """Single value f(n) via the factorization chase (reference path)."""
    v: complex = 1
    for p, e in factorize(n, table).factors:
        v = v * f.rule_checked(p, e)
        if v == 0:
            break
    if f.integer_valued:
        return int(round(v.real)) if isinstance(v, complex) else int(v)
    return v


def _eval_window(f: MultiplicativeSpec, lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Evaluate f over [lo, hi) by stripping base primes, then applying the
    prime rule to the single large cofactor that remains."""
    dt = np.int8 if f.integer_valued else np.complex128
    res = np.arange(lo, hi, dtype=np.int64)
    vals = np.ones(hi - lo, dtype=dt)
    cache: dict = {}
    for p in base:
        p = int(p)
        start = max(p, ((lo + p - 1) // p) * p)
        if start >= hi:
            continue
        idx = np.arange(start - lo, hi - lo, p)
        r = res[idx] // p
        e = np.ones(len(idx), dtype=np.int64)
        while True:
            more = r % p == 0
            if not more.any():
                break
            r[more] //= p
            e[more] += 1
        for ee in np.unique(e):
            key = (p, int(ee))
            if key not in cache:
                cache[key] = f.rule_checked(*key)
            vals[idx[e == ee]] *= cache[key]
        res[idx] = r
    big = np.flatnonzero(res > 1)
    if big.size:
        vals[big] *= f.primes_vectorized(res[big])
    if lo <= 1 < hi:
        vals[1 - lo] = 1
    return vals


def eval_segments(
    f: MultiplicativeSpec, X: int, segment_length: int = 1 << 20
) -> Iterator[Tuple[int, np.ndarray]]:
    """Streamed evaluation over [1, X]: yields (segment_start, values)."""
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    base = small_primes(math.isqrt(X) + 1)
    for lo in range(1, X + 1, segment_length):
        hi = min(lo + segment_length, X + 1)
        yield lo, _eval_window(f, lo, hi, base)


def eval_range(f: MultiplicativeSpec, X: int, table: SpfTable) -> ValueTable:
    """Value table over [1, X] driven by the smallest-prime-factor table.

    Strips the leading prime power of every entry per round, mapping rule
    values through the round's unique prime powers.  Must agree entrywise
    with the streamed evaluator; the two paths cross-check each other.
    """
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    if table.lo != 1 or not table.covers(1, X + 1):
        raise WindowError(
            f"table window [{table.lo}, {table.hi}) does not cover [1, {X}]"
        )
    spf = table.spf
    dt = np.int8 if f.integer_valued else np.complex128
    vals = np.zeros(X + 1, dtype=dt)
    vals[1:] = 1
    cur = np.arange(X + 1, dtype=np.int64)
    cur[:2] = 1
    cache: dict = {}
    while True:
        active = np.flatnonzero(cur > 1)
        if not active.size:
            break
        c = cur[active]
        p = spf[c - 1].astype(np.int64)
        e = np.ones(active.size, dtype=np.int64)
        c = c // p
        while True:
            more = c % p == 0
            if not more.any():
                break
            c[more] //= p[more]
            e[more] += 1
        key = p << 6 | e  # e < 64
        uniq, inv = np.unique(key, return_inverse=True)
        uvals = np.empty(uniq.size, dtype=dt)
        for i, k in enumerate(uniq):
            k = int(k)
            pe = (k >> 6, k & 63)
            if pe not in cache:
                cache[pe] = f.rule_checked(*pe)
            uvals[i] = cache[pe]
        vals[active] *= uvals[inv]
        cur[active] = c
    return ValueTable(X=X, values=vals)


def _as_int(X) -> int:
    N = math.floor(X)
    if N < 1:
        raise ValueError(f"need floor(X) >= 1, got X={X}")
    return N


def mean(
    f: MultiplicativeSpec,
    X,
    values: Optional[Union[ValueTable, np.ndarray]] = None,
) -> complex:
    """(1/floor(X)) * sum_{n <= X} f(n), accumulated in ascending order.

    Integer-valued built-ins accumulate exactly in int64.
    """
    N = _as_int(X)
    arr = _values_array(values)
    if arr is not None:
        chunk = arr[1 : N + 1]
        total = chunk.sum(dtype=np.int64) if f.integer_valued else chunk.sum()
        return complex(total) / N
    total = 0
    for lo, seg in eval_segments(f, N):
        total += seg.sum(dtype=np.int64) if f.integer_valued else seg.sum()
    return complex(total) / N


def progression_terms(N: int, q: int, a_reduced: int) -> int:
    return (N - a_reduced) // q + 1


def mean_progression(
    f: MultiplicativeSpec,
    X,
    q: int,
    a: int,
    values: Optional[Union[ValueTable, np.ndarray]] = None,
) -> complex:
    """Average of f over {n <= X : n == a (mod q)}; a may be negative."""
    N = _as_int(X)
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    a0 = a % q
    if a0 == 0:
        a0 = q
    if a0 > N:
        raise ValueError(f"empty progression: least term {a0} exceeds X={N}")
    terms = progression_terms(N, q, a0)
    arr = _values_array(values)
    if arr is not None:
        chunk = arr[a0 : N + 1 : q]
        total = chunk.sum(dtype=np.int64) if f.integer_valued else chunk.sum()
        return complex(total) / terms
    total = 0
    for lo, seg in eval_segments(f, N):
        hi = lo + len(seg)
        first = a0 + ((max(lo, a0) - a0 + q - 1) // q) * q
        if first < hi:
            chunk = seg[first - lo :: q]
            total += chunk.sum(dtype=np.int64) if f.integer_valued else chunk.sum()
    return complex(total) / terms


def _values_array(values) -> Optional[np.ndarray]:
    if values is None:
        return None
    return values.values if isinstance(values, ValueTable) else values
