"""Exact modular machinery and bilinear Kloosterman-fraction sums.

Phases e(x/m) are always formed from an exact residue x mod m computed in
integer arithmetic and mapped to the unit circle once, so no rounding
accumulates across the double sums.  The reciprocity relation
(v^-1 mod u)/u + (u^-1 mod v)/v == 1/(uv) (mod 1) flips the modulus of a
fraction exactly; the module checks both the exact pre-reciprocity
factorization of the paired-congruence phase and the error of the
post-reciprocity form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .sieve import primes_in

MAX_MODULUS_PRODUCT = 1 << 62

# |e(x) - e(y)| <= 2*pi*|x - y|; the post-reciprocity phase differs from the
# exact one by ahp/(p*p'*q*q'), giving the recorded constant below.
RECIPROCITY_ERROR_C = 2 * math.pi

BETTIN_CHANDEE_EXPONENT = 2 - 1 / 20


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def mod_inverse(x: int, m: int) -> int:
    """y in [1, m) with x*y == 1 (mod m), by the extended Euclid algorithm."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    g, s, _ = xgcd(x % m, m)
    if g != 1:
        raise ValueError(f"{x} is not invertible modulo {m} (gcd {g})")
    return s % m


def _crt_pair(r1: int, q1: int, r2: int, q2: int) -> int:
    """Unique r in [0, q1*q2) with r == r1 (mod q1) and r == r2 (mod q2)."""
    if q1 * q2 > MAX_MODULUS_PRODUCT:
        raise OverflowError(f"modulus product {q1 * q2} exceeds 2**62")
    t = ((r2 - r1) * mod_inverse(q1 % q2, q2)) % q2
    return (r1 % q1) + q1 * t


def crt_residue(p: int, p_prime: int, a: int, q: int, q_prime: int) -> int:
    """The unique r in [0, q*q') with p*r == a (mod q), p'*r == a (mod q')."""
    if q == q_prime:
        raise ValueError(f"moduli must be distinct, got q = q' = {q}")
    r1 = (a * mod_inverse(p, q)) % q
    r2 = (a * mod_inverse(p_prime, q_prime)) % q_prime
    return _crt_pair(r1, q, r2, q_prime)


def reciprocity_check(u: int, v: int) -> int:
    """Exact value of (v^-1 mod u)/u + (u^-1 mod v)/v - 1/(uv).

    Asserts integrality (the reciprocity relation) and returns the integer.
    """
    if u < 2 or v < 2:
        raise ValueError(f"need u, v >= 2, got u={u}, v={v}")
    if math.gcd(u, v) != 1:
        raise ValueError(f"u={u}, v={v} are not coprime")
    total = (
        Fraction(mod_inverse(v, u), u)
        + Fraction(mod_inverse(u, v), v)
        - Fraction(1, u * v)
    )
    if total.denominator != 1:
        raise AssertionError(f"reciprocity defect at (u, v)=({u}, {v}): {total}")
    return total.numerator


def unit_phase(numerator: int, modulus: int) -> complex:
    """e(numerator/modulus) via the exact residue numerator mod modulus."""
    return cmath.exp(2j * math.pi * (numerator % modulus) / modulus)


def _frac_mod1(x: Fraction) -> Fraction:
    return Fraction(x.numerator % x.denominator, x.denominator)


@dataclass(frozen=True)
class PhaseSpec:
    """Inputs of the bilinear phase sum over prime pairs q != q' in [Q, 2Q).

    alpha/beta map primes to coefficients of modulus at most 1; None means
    the constant 1.
    """

    p: int
    p_prime: int
    a: int
    h: int
    Q: int
    alpha: Optional[Mapping[int, complex]] = None
    beta: Optional[Mapping[int, complex]] = None

    def __post_init__(self):
        if self.p == self.p_prime:
            raise ValueError("p and p' must be distinct")
        if self.Q < 2:
            raise ValueError(f"need Q >= 2, got {self.Q}")
        for coeffs, label in ((self.alpha, "alpha"), (self.beta, "beta")):
            if coeffs is None:
                continue
            for qv, c in coeffs.items():
                if abs(c) > 1 + 1e-9:
                    raise ValueError(f"|{label}({qv})| = {abs(c):.6g} exceeds 1")

    def alpha_at(self, q: int) -> complex:
        return 1 if self.alpha is None else self.alpha.get(q, 0)

    def beta_at(self, q: int) -> complex:
        return 1 if self.beta is None else self.beta.get(q, 0)


@dataclass(frozen=True)
class PhaseCheck:
    """Exact and approximate forms of the paired-congruence phase."""

    exact_lhs: Fraction
    exact_rhs: Fraction
    exact_equal: bool
    post_lhs: complex
    post_rhs: complex
    post_error: float
    error_bound: float
    error_bound_ok: bool
    error_constant: float


def phase_identity_check(spec: PhaseSpec, q: int, q_prime: int) -> PhaseCheck:
    """Check the two-stage phase manipulation at one prime pair.

    Stage one (exact): e_{qq'}(h r) factors through moduli p'q and pq' with
    rational phase arguments equal mod 1.  Stage two (reciprocity): flipping
    the modulus of the pq' fraction leaves a phase defect of exactly
    a*h*p/(p*p'*q*q'), so |post_lhs - post_rhs| <= 2*pi*|a*h|/Q**2.
    """
    p, pp, a, h = spec.p, spec.p_prime, spec.a, spec.h
    r = crt_residue(p, pp, a, q, q_prime)
    M = q * q_prime

    exact_lhs = _frac_mod1(Fraction(h * r, M))
    inv_q = mod_inverse(p * q_prime, q)
    inv_qp = mod_inverse(pp * q, q_prime)
    exact_rhs = _frac_mod1(
        Fraction(a * h * pp * inv_q, pp * q) + Fraction(a * h * p * inv_qp, p * q_prime)
    )

    post_lhs = unit_phase(-h * r, M)
    inv_big = mod_inverse(p * q_prime, pp * q)
    post_rhs = unit_phase(a * h * (p - pp) * inv_big, pp * q)
    err = abs(post_lhs - post_rhs)
    bound = RECIPROCITY_ERROR_C * abs(a * h) / spec.Q**2
    return PhaseCheck(
        exact_lhs=exact_lhs,
        exact_rhs=exact_rhs,
        exact_equal=exact_lhs == exact_rhs,
        post_lhs=post_lhs,
        post_rhs=post_rhs,
        post_error=err,
        error_bound=bound,
        error_bound_ok=err <= bound + 1e-12,
        error_constant=RECIPROCITY_ERROR_C,
    )


def bilinear_sum(spec: PhaseSpec, primes: Optional[Sequence[int]] = None) -> complex:
    """Sum of alpha(q) beta(q') e_{qq'}(-h r(q,q')) over ordered pairs of
    distinct primes q, q' in [Q, 2Q), in lexicographic order."""
    if primes is None:
        primes = primes_in(spec.Q, 2 * spec.Q)
    if len(primes) < 2:
        raise ValueError(f"need at least two primes in [{spec.Q}, {2 * spec.Q})")
    p, pp, a, h = spec.p, spec.p_prime, spec.a, spec.h
    inv_p = {q: mod_inverse(p, q) for q in primes}
    inv_pp = {q: mod_inverse(pp, q) for q in primes}
    total = 0j
    for q in primes:
        aq = spec.alpha_at(q)
        if aq == 0:
            continue
        r1 = (a * inv_p[q]) % q
        partial = 0j
        for qp in primes:
            if qp == q:
                continue
            bq = spec.beta_at(qp)
            if bq == 0:
                continue
            r2 = (a * inv_pp[qp]) % qp
            r = _crt_pair(r1, q, r2, qp)
            partial += aq * bq * unit_phase(-h * r, q * qp)
        total += partial
    return total


@dataclass(frozen=True)
class ScanRow:
    Q: int
    n_primes: int
    abs_sum: float
    trivial_bound: float
    ratio: float


@dataclass(frozen=True)
class KloostermanScan:
    rows: List[ScanRow]
    slope: float
    intercept: float
    trivial_slope: float = 2.0
    reference_slope: float = BETTIN_CHANDEE_EXPONENT


def cancellation_scan(
    Q_grid: Sequence[int],
    p: int,
    p_prime: int,
    a: int,
    h: int,
    alpha: Optional[Mapping[int, complex]] = None,
    beta: Optional[Mapping[int, complex]] = None,
    min_primes: int = 2,
) -> KloostermanScan:
    """|Sigma| across a grid of Q with the trivial bound (#primes)**2 and the
    least-squares slope of log|Sigma| against log Q.

    min_primes guards against grids too thin to carry any pairs; grids for
    slope comparison should keep dozens of primes per point.
    """
    if len(Q_grid) < 4:
        raise ValueError(f"need a grid of at least 4 values of Q, got {len(Q_grid)}")
    rows = []
    for Q in sorted(Q_grid):
        primes = primes_in(Q, 2 * Q)
        if len(primes) < max(2, min_primes):
            raise ValueError(
                f"insufficient primes in [{Q}, {2 * Q}): {len(primes)} < {max(2, min_primes)}"
            )
        spec = PhaseSpec(p=p, p_prime=p_prime, a=a, h=h, Q=Q, alpha=alpha, beta=beta)
        s = bilinear_sum(spec, primes)
        n = len(primes)
        rows.append(
            ScanRow(
                Q=Q,
                n_primes=n,
                abs_sum=abs(s),
                trivial_bound=float(n * n),
                ratio=abs(s) / (n * n),
            )
        )
    slope, intercept = np.polyfit(
        np.log([r.Q for r in rows]), np.log([r.abs_sum for r in rows]), 1
    )
    return KloostermanScan(rows=rows, slope=float(slope), intercept=float(intercept))


@dataclass(frozen=True)
class AdversarialReport:
    Q: int
    p: int
    p_prime: int
    X: int
    variant: str
    assignment: Dict[int, int]
    sum_exact: Fraction = field(repr=False)
    sum_value: float
    ratio: float  # sum / Q**2


def _progression_count(r: int, modulus: int, X: int) -> int:
    """#{1 <= m <= X : m == r (mod modulus)} for r in [0, modulus)."""
    if r == 0:
        return X // modulus
    if r > X:
        return 0
    return (X - r) // modulus + 1


def _assignment_sum(
    primes: Sequence[int], assignment: Mapping[int, int], p: int, pp: int, X: int
) -> Fraction:
    """Exact sum over ordered pairs (q, q') of
    #{m <= X : pm == a(q) (q), p'm == a(q') (q')} - X/(q q')."""
    inv_p = {q: mod_inverse(p, q) for q in primes}
    inv_pp = {q: mod_inverse(pp, q) for q in primes}
    total = Fraction(0)
    for q in primes:
        r1 = (assignment[q] * inv_p[q]) % q
        for qp in primes:
            r2 = (assignment[qp] * inv_pp[qp]) % qp
            if qp == q:
                count = _progression_count(r1, q, X) if r1 == r2 else 0
                total += count - Fraction(X, q * q)
            else:
                r = _crt_pair(r1, q, r2, qp)
                total += _progression_count(r, q * qp, X) - Fraction(X, q * qp)
    return total


def adversarial_assignment(
    Q: int, p: int, p_prime: int, X: int, split: str = "halves"
) -> AdversarialReport:
    """Residues chosen to force m = 1 for every cross pair.

    Primes of [Q, 2Q) are split into S (assigned residue p) and S'
    (assigned p'); for q in S and q' in S' the joint solution of the two
    congruences is m == 1 (mod qq'), counted at m = 1 whenever X >= 1.
    split is "halves" (first half of the primes by order into S) or
    "alternating".
    """
    primes = primes_in(Q, 2 * Q)
    if len(primes) < 2:
        raise ValueError(f"insufficient primes in [{Q}, {2 * Q})")
    if split == "halves":
        S = primes[: len(primes) // 2]
        S_prime = primes[len(primes) // 2 :]
    elif split == "alternating":
        S = primes[0::2]
        S_prime = primes[1::2]
    else:
        raise ValueError(f"unknown split {split!r}")
    assignment = {q: p for q in S} | {q: p_prime for q in S_prime}
    total = _assignment_sum(primes, assignment, p, p_prime, X)
    return AdversarialReport(
        Q=Q,
        p=p,
        p_prime=p_prime,
        X=X,
        variant=f"adversarial-{split}",
        assignment=assignment,
        sum_exact=total,
        sum_value=float(total),
        ratio=float(total) / Q**2,
    )


def fixed_assignment_sum(
    Q: int, p: int, p_prime: int, X: int, a: int = 1
) -> AdversarialReport:
    """Same bilinear count with the honest constant assignment a(q) = a."""
    primes = primes_in(Q, 2 * Q)
    if len(primes) < 2:
        raise ValueError(f"insufficient primes in [{Q}, {2 * Q})")
    assignment = {q: a for q in primes}
    total = _assignment_sum(primes, assignment, p, p_prime, X)
    return AdversarialReport(
        Q=Q,
        p=p,
        p_prime=p_prime,
        X=X,
        variant=f"fixed-a={a}",
        assignment=assignment,
        sum_exact=total,
        sum_value=float(total),
        ratio=float(total) / Q**2,
    )
