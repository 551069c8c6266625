"""Discrepancy scans over prime moduli and the composite-modulus demo.

For a bounded multiplicative f the scan records, for every prime q in
[Q, 2Q), the difference between the mean of f on the progression
n == a (mod q), n <= X and the global mean on [1, X], then counts the
moduli whose discrepancy exceeds a threshold eps.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .multfn import MultiplicativeSpec, builtin, eval_segments, progression_terms
from .sieve import primes_in

QMAX_EXPONENT = 0.5 + 1.0 / 78.0


class RegimeError(ValueError):
    """Raised in strict mode when parameters leave the supported regime."""


@dataclass(frozen=True)
class Params:
    """Scan parameters; eta = log Q / log X - 1/2 is derived."""

    X: int
    Q: int
    a: int
    eps: float
    sigma: float = 0.05
    eta: float = field(init=False)

    def __post_init__(self):
        if self.X < 2 or self.Q < 2:
            raise ValueError(f"need X >= 2 and Q >= 2, got X={self.X}, Q={self.Q}")
        if self.a == 0:
            raise ValueError("residue a must be nonzero")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 < self.sigma < 0.5:
            raise ValueError(f"sigma must lie in (0, 1/2), got {self.sigma}")
        object.__setattr__(self, "eta", math.log(self.Q) / math.log(self.X) - 0.5)

    def regime_violations(self) -> List[str]:
        out = []
        lo, hi = self.X ** (1 / 3), self.X ** (QMAX_EXPONENT - self.sigma)
        if not lo < self.Q < hi:
            out.append(
                f"Q={self.Q} outside (X^(1/3), X^(1/2+1/78-sigma)) = ({lo:.1f}, {hi:.1f})"
            )
        if not abs(self.a) < 10 * self.Q:
            out.append(f"|a|={abs(self.a)} not below 10Q={10 * self.Q}")
        return out


def check_regime(params: Params, strict: bool) -> None:
    for msg in params.regime_violations():
        if strict:
            raise RegimeError(msg)
        warnings.warn(msg, stacklevel=3)


@dataclass(frozen=True)
class DiscrepancyRecord:
    q: int
    a_reduced: int
    D: complex
    terms: int


@dataclass(frozen=True)
class DiscrepancyReport:
    params: Params
    records: List[DiscrepancyRecord]
    exceptional_count: int
    global_mean: complex

    def exceptional_fraction(self) -> float:
        return self.exceptional_count / len(self.records)


def scan(
    f: MultiplicativeSpec,
    params: Params,
    segment_length: int = 1 << 20,
    threads: int = 1,
    strict: bool = False,
) -> DiscrepancyReport:
    """One DiscrepancyRecord per prime q in [Q, 2Q), ascending.

    Values of f stream through fixed-size segments, so X is bounded by
    time rather than memory.  Per-modulus sums live in disjoint slots and
    segments are processed in order, making the report identical at any
    thread count.
    """
    check_regime(params, strict)
    X, Q, a = params.X, params.Q, params.a
    primes = primes_in(Q, 2 * Q)
    if not primes:
        raise ValueError(f"no primes in [{Q}, {2 * Q})")
    nq = len(primes)
    q_arr = np.array(primes, dtype=np.int64)
    a0 = np.array([a % q or q for q in primes], dtype=np.int64)
    if int(a0.max()) > X:
        raise ValueError("window too small: some progression has no terms <= X")

    exact = f.integer_valued
    sums = np.zeros(nq, dtype=np.int64 if exact else np.complex128)
    terms = np.zeros(nq, dtype=np.int64)
    global_sum = 0

    def accumulate(i0: int, i1: int, lo: int, hi: int, seg: np.ndarray) -> None:
        for i in range(i0, i1):
            q = int(q_arr[i])
            start = int(a0[i])
            if start < lo:
                start += ((lo - start + q - 1) // q) * q
            if start >= hi:
                continue
            chunk = seg[start - lo :: q]
            sums[i] += chunk.sum(dtype=np.int64) if exact else chunk.sum()
            terms[i] += len(chunk)

    n_workers = max(1, threads)
    bounds = np.linspace(0, nq, n_workers + 1).astype(int)
    for lo, seg in eval_segments(f, X, segment_length):
        hi = lo + len(seg)
        global_sum += seg.sum(dtype=np.int64) if exact else seg.sum()
        if n_workers == 1:
            accumulate(0, nq, lo, hi, seg)
        else:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                futs = [
                    pool.submit(accumulate, int(bounds[k]), int(bounds[k + 1]), lo, hi, seg)
                    for k in range(n_workers)
                ]
                for fut in futs:
                    fut.result()

    global_mean = complex(global_sum) / X
    records = []
    for i in range(nq):
        t = int(terms[i])
        assert t == progression_terms(X, int(q_arr[i]), int(a0[i]))
        D = complex(sums[i]) / t - global_mean
        records.append(
            DiscrepancyRecord(q=int(q_arr[i]), a_reduced=int(a0[i]), D=D, terms=t)
        )
    exceptional = sum(1 for r in records if abs(r.D) > params.eps)
    return DiscrepancyReport(
        params=params,
        records=records,
        exceptional_count=exceptional,
        global_mean=global_mean,
    )


def exceptional_bound(params: Params, c_fit: float) -> float:
    """Reference size Q * eps**-1 * X**(-c_fit*sigma*eps) for the count of
    large-discrepancy prime moduli; c_fit is supplied by the caller."""
    if c_fit <= 0:
        raise ValueError(f"c_fit must be positive, got {c_fit}")
    return params.Q / params.eps * params.X ** (-c_fit * params.sigma * params.eps)


@dataclass(frozen=True)
class CounterexampleReport:
    """Even-modulus bias of the parity-weighted squarefree indicator."""

    X: int
    function: str
    mean_odd: complex
    mean_even: complex
    global_mean: complex
    D_odd: complex
    D_even: complex


def composite_counterexample(
    X: int,
    f: Optional[MultiplicativeSpec] = None,
    segment_length: int = 1 << 20,
) -> CounterexampleReport:
    """Discrepancies at the composite modulus q = 2 for residues 1 and 2.

    With the default parity-biased squarefree function the odd progression
    carries a mean near the squarefree-among-odds density while the two
    modulus-2 discrepancies stay bounded away from zero, in contrast with
    the prime-modulus scans.
    """
    if X < 1000:
        raise ValueError(f"need X >= 10**3, got {X}")
    if f is None:
        f = builtin("parity_squarefree")
    exact = f.integer_valued
    total = 0
    odd_sum = 0
    even_sum = 0
    for lo, seg in eval_segments(f, X, segment_length):
        total += seg.sum(dtype=np.int64) if exact else seg.sum()
        odd = seg[(1 - lo) % 2 :: 2]
        even = seg[(2 - lo) % 2 :: 2]
        odd_sum += odd.sum(dtype=np.int64) if exact else odd.sum()
        even_sum += even.sum(dtype=np.int64) if exact else even.sum()
    n_odd = progression_terms(X, 2, 1)
    n_even = progression_terms(X, 2, 2)
    gm = complex(total) / X
    mean_odd = complex(odd_sum) / n_odd
    mean_even = complex(even_sum) / n_even
    return CounterexampleReport(
        X=X,
        function=f.name,
        mean_odd=mean_odd,
        mean_even=mean_even,
        global_mean=gm,
        D_odd=mean_odd - gm,
        D_even=mean_even - gm,
    )
