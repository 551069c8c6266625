"""Trivial/sieve/bilinear decomposition of mean f*F correlations and the
progression-test function F.

F(n) = sum_q xi_q (1_{n == a (q)} - 1/q) over primes q in [Q, 2Q), with
F(a) = 0.  The decomposition compares the measured mean of f(n)F(n)
against the three computable error terms; the supremum inside the
bilinear term runs over a declared finite interval policy rather than all
subintervals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Union

import numpy as np

from .kloosterman import mod_inverse
from .multfn import MultiplicativeSpec, ValueTable, eval_segments, progression_terms
from .sieve import primes_in


class RegimeError(ValueError):
    pass


def _check_regime(ok: bool, msg: str, strict: bool) -> None:
    if ok:
        return
    if strict:
        raise RegimeError(msg)
    warnings.warn(msg, stacklevel=3)


@dataclass(frozen=True)
class ProgressionF:
    """Evaluator for the progression-test function.

    xi maps primes q in [Q, 2Q) to coefficients with |xi_q| <= 1; absent
    keys mean 0.  F(a) = 0 exactly.
    """

    Q: int
    a: int
    xi: Dict[int, complex]

    def __post_init__(self):
        valid = set(primes_in(self.Q, 2 * self.Q))
        for q, c in self.xi.items():
            if q not in valid:
                raise ValueError(f"xi key {q} is not a prime in [{self.Q}, {2 * self.Q})")
            if abs(c) > 1 + 1e-9:
                raise ValueError(f"|xi_{q}| = {abs(c):.6g} exceeds 1")

    @property
    def base(self) -> complex:
        return -sum(c / q for q, c in sorted(self.xi.items()))

    def eval(self, n: int) -> complex:
        if n == self.a:
            return 0j
        v = self.base
        for q, c in self.xi.items():
            if (n - self.a) % q == 0:
                v += c
        return v

    def values(self, n_lo: int, n_hi: int) -> np.ndarray:
        """F(n) for n in [n_lo, n_hi) as a complex array."""
        arr = np.full(n_hi - n_lo, self.base, dtype=np.complex128)
        for q, c in sorted(self.xi.items()):
            first = n_lo + ((self.a - n_lo) % q)
            if first < n_hi:
                arr[first - n_lo :: q] += c
        if n_lo <= self.a < n_hi:
            arr[self.a - n_lo] = 0
        return arr

    def values_on_multiples(self, p: int, m_lo: int, m_hi: int) -> np.ndarray:
        """F(p*m) for m in [m_lo, m_hi); p must be coprime to every modulus
        (automatic for p below Q)."""
        arr = np.full(m_hi - m_lo, self.base, dtype=np.complex128)
        for q, c in sorted(self.xi.items()):
            res = (self.a * mod_inverse(p, q)) % q
            first = m_lo + ((res - m_lo) % q)
            if first < m_hi:
                arr[first - m_lo :: q] += c
        if self.a > 0 and self.a % p == 0 and m_lo <= self.a // p < m_hi:
            arr[self.a // p - m_lo] = 0
        return arr


def make_progression_F(Q: int, a: int, xi: Dict[int, complex]) -> ProgressionF:
    return ProgressionF(Q=Q, a=a, xi=dict(xi))


def align_xi(
    f: MultiplicativeSpec, X: int, Q: int, a: int, S: Iterable[int]
) -> Dict[int, complex]:
    """Unit-modulus coefficients turning each selected modulus's discrepancy
    into a nonnegative real contribution: xi_q = conj(D_q)/|D_q|."""
    S = sorted(set(S))
    valid = set(primes_in(Q, 2 * Q))
    for q in S:
        if q not in valid:
            raise ValueError(f"{q} is not a prime in [{Q}, {2 * Q})")
    fvals = values_array(f, X)
    exact = f.integer_valued
    total = fvals[1:].sum(dtype=np.int64) if exact else fvals[1:].sum()
    gm = complex(total) / X
    out: Dict[int, complex] = {}
    for q in S:
        a0 = a % q or q
        if a0 > X:
            raise ValueError(f"empty progression for q={q}: least term {a0} > X={X}")
        chunk = fvals[a0 : X + 1 : q]
        s = chunk.sum(dtype=np.int64) if exact else chunk.sum()
        D = complex(s) / progression_terms(X, q, a0) - gm
        out[q] = 1.0 + 0j if D == 0 else D.conjugate() / abs(D)
    return out


def values_array(f: MultiplicativeSpec, X: int) -> np.ndarray:
    """f(n) for 0 <= n <= X as one array (index 0 unused, set to 0)."""
    dt = np.int8 if f.integer_valued else np.complex128
    out = np.zeros(X + 1, dtype=dt)
    for lo, seg in eval_segments(f, X):
        out[lo : lo + len(seg)] = seg
    return out


FLike = Union[ProgressionF, ValueTable, np.ndarray]


def _f_values(F: FLike, n_lo: int, n_hi: int) -> np.ndarray:
    if isinstance(F, ProgressionF):
        return F.values(n_lo, n_hi)
    arr = F.values if isinstance(F, ValueTable) else F
    if n_hi > len(arr):
        raise ValueError(f"value array of length {len(arr)} cannot cover n < {n_hi}")
    return arr[n_lo:n_hi]


def _f_on_multiples(F: FLike, p: int, m_lo: int, m_hi: int) -> np.ndarray:
    if isinstance(F, ProgressionF):
        return F.values_on_multiples(p, m_lo, m_hi)
    arr = F.values if isinstance(F, ValueTable) else F
    if p * (m_hi - 1) >= len(arr):
        raise ValueError(
            f"value array of length {len(arr)} cannot cover p*m = {p * (m_hi - 1)}"
        )
    return arr[p * m_lo : p * m_hi : p]


def e_triv(F_inf: float, Y: int) -> float:
    """Y**(-1/2) * sup|F|."""
    if F_inf < 0:
        raise ValueError("sup-norm must be nonnegative")
    if Y < 2:
        raise ValueError(f"need Y >= 2, got {Y}")
    return F_inf / math.sqrt(Y)


def default_sieve_params(X: float, eps: float, sigma: float) -> tuple[float, float]:
    """The canonical parameter choice Y = X^(eps*sigma/4), Z = X^(sigma/4).

    Useful at asymptotic scale; desk-scale runs usually pick Y, Z directly
    since these powers stay tiny for feasible X.
    """
    if not (X > 1 and eps > 0 and sigma > 0):
        raise ValueError("need X > 1, eps > 0, sigma > 0")
    return X ** (eps * sigma / 4), X ** (sigma / 4)


def e_sieve(F: FLike, X: int, Y: int, Z: int) -> float:
    """Mean over n <= X of |F(n)| restricted to n coprime to every prime in
    [Y, Z), by direct enumeration."""
    rough = np.ones(X + 1, dtype=bool)
    for p in primes_in(Y, Z):
        rough[p::p] = False
    absF = np.abs(_f_values(F, 1, X + 1)).astype(np.float64)
    return float(absF[rough[1:]].sum()) / X


@dataclass(frozen=True)
class IntervalPolicy:
    """Finite stand-in for the supremum over all subintervals: exponential
    ranges (X e^{-i-1}, X e^{-i}] plus `subintervals` equally spaced left
    endpoints inside each range."""

    subintervals: int = 8

    def __post_init__(self):
        if self.subintervals < 1:
            raise ValueError("need at least one subinterval per range")


def exponential_ranges(X: int, Y: int, Z: int):
    """(lo, hi) real endpoints of the ranges the policy samples, largest
    first, every hi above the X/(10YZ) cutoff."""
    cutoff = X / (10 * Y * Z)
    out = []
    i = 0
    while True:
        hi = X * math.exp(-i)
        if hi <= cutoff or hi < 1:
            break
        out.append((X * math.exp(-i - 1), hi))
        i += 1
    return out


def e_bilinear(
    F: FLike, X: int, Y: int, Z: int, policy: IntervalPolicy = IntervalPolicy()
) -> float:
    """sqrt of the sampled supremum of
    (1/max I) |sum_{m in I, (m, pp') = 1} F(pm) conj(F(p'm))|
    over prime pairs Y <= p < p' < Z and policy intervals.

    Ties break toward the lexicographically first (p, p', interval start),
    so the result is independent of evaluation order.
    """
    P = primes_in(Y, Z)
    if len(P) < 2:
        raise ValueError(f"no prime pair in [{Y}, {Z})")
    ranges = exponential_ranges(X, Y, Z)
    s = policy.subintervals
    best = 0.0
    for ia, p in enumerate(P):
        for pp in P[ia + 1 :]:
            for lo, hi in ranges:
                m_start = math.floor(lo) + 1
                m_end = math.floor(hi)
                if m_end < m_start:
                    continue
                m = np.arange(m_start, m_end + 1, dtype=np.int64)
                z1 = _f_on_multiples(F, p, m_start, m_end + 1).astype(np.complex128)
                z2 = _f_on_multiples(F, pp, m_start, m_end + 1).astype(np.complex128)
                z = z1 * np.conj(z2)
                z[(m % p == 0) | (m % pp == 0)] = 0
                suffix = np.cumsum(z[::-1])[::-1]
                for j in range(s):
                    t = lo + j * (hi - lo) / s
                    k = max(m_start, math.floor(t) + 1) - m_start
                    if k >= len(z):
                        continue
                    cand = abs(suffix[k]) / hi
                    if cand > best:
                        best = cand
    return math.sqrt(best)


@dataclass(frozen=True)
class BilinearDecomposition:
    lhs: complex
    e_triv: float
    e_sieve: float
    e_bilinear: float
    fitted_C: Optional[float]
    F_inf: float = 0.0

    @property
    def error_total(self) -> float:
        return self.e_triv + self.e_sieve + self.e_bilinear


def decompose(
    f: MultiplicativeSpec,
    F: FLike,
    X: int,
    Y: int,
    Z: int,
    policy: IntervalPolicy = IntervalPolicy(),
    strict: bool = False,
) -> BilinearDecomposition:
    """Measured mean of f(n)F(n) next to the three error terms.

    fitted_C = |lhs| / (e_triv + e_sieve + e_bilinear) when the error side
    is nonzero, else None.
    """
    _check_regime(1 < Y < Z, f"need 1 < Y < Z, got Y={Y}, Z={Z}", strict=True)
    _check_regime(
        Z < X ** (1 / 16),
        f"Z={Z} not below X^(1/16)={X ** (1 / 16):.2f}",
        strict,
    )
    fvals = values_array(f, X)
    Fvals = _f_values(F, 1, X + 1)
    lhs = complex((fvals[1:].astype(np.complex128) * Fvals).sum()) / X
    F_inf = float(np.abs(Fvals).max())
    et = e_triv(F_inf, Y)
    es = e_sieve(F, X, Y, Z)
    eb = e_bilinear(F, X, Y, Z, policy)
    total = et + es + eb
    fitted = abs(lhs) / total if total > 0 else None
    return BilinearDecomposition(
        lhs=lhs, e_triv=et, e_sieve=es, e_bilinear=eb, fitted_C=fitted, F_inf=F_inf
    )


def sieve_count(
    X: int, q: int, a: int, Y: int, Z: int, strict: bool = False
) -> tuple[int, float]:
    """(count, ratio): count of n <= X with n == a (mod q) and no prime
    factor in [Y, Z); ratio = count / ((log Y / log Z) * X / q)."""
    _check_regime(q < X ** 0.75, f"q={q} not below X^(3/4)", strict)
    _check_regime(
        1 < Y < Z < X ** 0.1,
        f"(Y, Z)=({Y}, {Z}) not inside 1 < Y < Z < X^(1/10)={X ** 0.1:.2f}",
        strict,
    )
    a0 = a % q or q
    if a0 > X:
        return 0, 0.0
    n = np.arange(a0, X + 1, q, dtype=np.int64)
    keep = np.ones(len(n), dtype=bool)
    for p in primes_in(Y, Z):
        keep &= n % p != 0
    count = int(keep.sum())
    ratio = count / ((math.log(Y) / math.log(Z)) * X / q)
    return count, ratio
