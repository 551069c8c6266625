"""Ramare weight w(n) = 1/(#{p in [Y,Z) : p | n} + 1), its identity, and
window moments of w.

The identity: for n with no repeated prime factor in [Y, Z), the sum of
w(n/p) over range primes p | n is 1 when such a prime exists and 0
otherwise.  Verification here is exact; moments accumulate as rationals
via a histogram of divisor counts and convert to float only in reports.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .sieve import (
    SpfTable,
    factorize,
    mu2_range,
    mu2_range_array,
    omega_in_range,
    omega_range_array,
    primes_in,
)

DEFAULT_SEGMENT = 1 << 22


class RegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RamareParams:
    Y: int
    Z: int

    def __post_init__(self):
        if not 1 < self.Y < self.Z:
            raise ValueError(f"need 1 < Y < Z, got Y={self.Y}, Z={self.Z}")

    @property
    def u(self) -> float:
        return math.log(self.Z) / math.log(self.Y)


def weight(n: int, Y: int, Z: int, table: SpfTable) -> Fraction:
    """Exact rational w(n)."""
    return Fraction(1, omega_in_range(n, Y, Z, table) + 1)


def identity_check(n: int, Y: int, Z: int, table: SpfTable) -> Optional[bool]:
    """Exact check of the weight identity at n.

    Returns None ("not applicable") when some range prime divides n twice,
    True/False otherwise.  Each w(n/p) is computed from an independent
    factorization of the cofactor, not from omega(n) - 1.
    """
    if mu2_range(n, Y, Z, table) == 0:
        return None
    range_ps = [p for p in factorize(n, table).distinct_primes() if Y <= p < Z]
    lhs = sum(
        (Fraction(1, omega_in_range(n // p, Y, Z, table) + 1) for p in range_ps),
        start=Fraction(0),
    )
    rhs = 1 if range_ps else 0
    return lhs == rhs


@dataclass(frozen=True)
class IdentityVerification:
    X: int
    Y: int
    Z: int
    checked: int
    not_applicable: int
    failures: List[int]

    @property
    def all_hold(self) -> bool:
        return not self.failures


def verify_identity_range(X: int, Y: int, Z: int) -> IdentityVerification:
    """Exhaustive exact verification of the identity for all n <= X with
    no repeated range-prime factor.

    Works in integer arithmetic: each term denominator comes from the
    divisibility-count array (independent of any factorization chase), and
    the rational sum is folded as an exact numerator/denominator pair.
    """
    omega = omega_range_array(X, Y, Z)
    mu2ok = mu2_range_array(X, Y, Z)
    mu2ok[0] = False
    rp = primes_in(Y, Z)
    kmax = int(omega.max()) if rp else 0
    if kmax and (int(omega.max()) + 1) ** kmax >= 2**62:
        raise OverflowError("denominator fold would overflow int64")

    T = np.zeros((X + 1, kmax), dtype=np.int16)
    slot = np.zeros(X + 1, dtype=np.int8)
    for p in rp:
        m = np.arange(1, X // p + 1, dtype=np.int64)
        n = m * p
        keep = mu2ok[n]
        m, n = m[keep], n[keep]
        T[n, slot[n]] = omega[m] + 1
        slot[n] += 1

    num = np.zeros(X + 1, dtype=np.int64)
    den = np.ones(X + 1, dtype=np.int64)
    for j in range(kmax):
        col = T[:, j].astype(np.int64)
        mask = col > 0
        num[mask] = num[mask] * col[mask] + den[mask]
        den[mask] *= col[mask]
    assert (den > 0).all()

    holds = np.where(slot > 0, num == den, num == 0)
    failures = np.flatnonzero(mu2ok & ~holds).tolist()
    return IdentityVerification(
        X=X,
        Y=Y,
        Z=Z,
        checked=int(mu2ok.sum()),
        not_applicable=X - int(mu2ok.sum()),
        failures=failures,
    )


def mertens_sum_exact(Y: int, Z: int) -> Fraction:
    """Sum of 1/p over primes Y <= p < Z, exact."""
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    return sum((Fraction(1, p) for p in primes_in(Y, Z)), start=Fraction(0))


def mertens_sum(Y: int, Z: int) -> float:
    return float(mertens_sum_exact(Y, Z))


@dataclass(frozen=True)
class MomentReport:
    """Window moments of the weight over [M, 2M)."""

    M: int
    Y: int
    Z: int
    u: float
    mertens: float
    second_moment: float
    fourth_centered: float
    log_u: float
    strict_regime: bool  # True when M >= Z**8

    @property
    def second_scaled(self) -> float:
        """second_moment * (log u)**2, the bounded combination."""
        return self.second_moment * self.log_u**2

    @property
    def fourth_scaled(self) -> float:
        """fourth_centered / (log u)**2, the bounded combination."""
        return self.fourth_centered / self.log_u**2


def _count_histogram(M: int, Y: int, Z: int, segment_length: int) -> np.ndarray:
    """Histogram over m in [M, 2M) of #{range primes dividing m}."""
    rp = primes_in(Y, Z) if Z > Y else []
    hist = np.zeros(len(rp) + 1, dtype=np.int64)
    for lo in range(M, 2 * M, segment_length):
        hi = min(lo + segment_length, 2 * M)
        counts = np.zeros(hi - lo, dtype=np.int16)
        for p in rp:
            start = ((lo + p - 1) // p) * p
            if start < hi:
                counts[start - lo :: p] += 1
        hist += np.bincount(counts, minlength=len(rp) + 1)
    return hist


def moment_report(
    M: int,
    Y: int,
    Z: int,
    segment_length: int = DEFAULT_SEGMENT,
    strict: bool = False,
) -> MomentReport:
    """Second moment of w and centered fourth moment of the divisor count
    over [M, 2M), both exact internally.

    The count is centered at the exact prime-reciprocal sum rather than at
    log u; the difference is absorbed by the bounded-ratio comparisons.
    M >= Z**8 is the supported regime; smaller M is allowed outside strict
    mode and labeled in the report.
    """
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if not 1 < Y < Z:
        raise ValueError(f"need 1 < Y < Z, got Y={Y}, Z={Z}")
    if 2 * M > 1 << 52:
        raise OverflowError(f"window [{M}, {2 * M}) too large")
    strict_ok = M >= Z**8
    if not strict_ok:
        msg = f"M={M} below the supported bound Z**8={Z**8}; results labeled relaxed"
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, RegimeWarning, stacklevel=2)
    u = math.log(Z) / math.log(Y)
    if u < 2:
        warnings.warn(f"u={u:.3f} < 2, outside the moment-bound regime",
                      RegimeWarning, stacklevel=2)

    hist = _count_histogram(M, Y, Z, segment_length)
    mu = mertens_sum_exact(Y, Z)
    second = Fraction(0)
    fourth = Fraction(0)
    for t, cnt in enumerate(hist):
        if cnt == 0:
            continue
        c = int(cnt)
        second += Fraction(c, (t + 1) ** 2)
        fourth += c * (t - mu) ** 4
    second /= M
    fourth /= M
    return MomentReport(
        M=M,
        Y=Y,
        Z=Z,
        u=u,
        mertens=float(mu),
        second_moment=float(second),
        fourth_centered=float(fourth),
        log_u=math.log(u),
        strict_regime=strict_ok,
    )


def second_moment(M: int, Y: int, Z: int, **kwargs) -> MomentReport:
    """Moment report whose second_moment field is E w(m)**2 over [M, 2M)."""
    return moment_report(M, Y, Z, **kwargs)


def fourth_moment_centered(M: int, Y: int, Z: int, **kwargs) -> float:
    """E (count - sum 1/p)**4 over [M, 2M) as a float."""
    return moment_report(M, Y, Z, **kwargs).fourth_centered
