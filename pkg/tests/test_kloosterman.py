import math
from fractions import Fraction

import numpy as np
import pytest

from progdist.kloosterman import (
    PhaseSpec,
    adversarial_assignment,
    bilinear_sum,
    cancellation_scan,
    crt_residue,
    fixed_assignment_sum,
    mod_inverse,
    phase_identity_check,
    reciprocity_check,
    xgcd,
)
from progdist.sieve import primes_in

from oracles import bilinear_sum_brute, crt_full_scan, crt_scan_brute


def test_mod_inverse_examples():
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(1, 97) == 1
    with pytest.raises(ValueError, match="not invertible"):
        mod_inverse(2, 4)
    with pytest.raises(ValueError, match="modulus"):
        mod_inverse(1, 1)


def test_mod_inverse_random_bulk():
    rng = np.random.default_rng(7)
    xs = rng.integers(1, 2**40, 10**6)
    ms = rng.integers(2, 2**40, 10**6)
    ok = np.gcd(xs, ms) == 1
    checked = 0
    for x, m in zip(xs[ok].tolist(), ms[ok].tolist()):
        y = mod_inverse(x, m)
        assert 1 <= y < m and (x * y) % m == 1
        checked += 1
    assert checked > 5 * 10**5


def test_xgcd():
    for a, b in ((12, 18), (35, 64), (1, 1), (10**9 + 7, 998244353)):
        g, s, t = xgcd(a, b)
        assert g == math.gcd(a, b)
        assert a * s + b * t == g


def test_crt_examples():
    assert crt_residue(2, 3, 1, 5, 7) == 33
    assert crt_residue(2, 3, 0, 5, 7) == 0
    r = crt_residue(5, 11, 4, 101, 103)
    assert 0 <= r < 101 * 103
    assert (5 * r - 4) % 101 == 0 and (11 * r - 4) % 103 == 0
    with pytest.raises(ValueError, match="distinct"):
        crt_residue(2, 3, 1, 7, 7)
    with pytest.raises(ValueError, match="not invertible"):
        crt_residue(5, 3, 1, 5, 7)


def test_crt_matches_scan_oracles():
    rng = np.random.default_rng(8)
    pairs = [(5, 7), (11, 13), (3, 97), (101, 211)]
    for q, qp in pairs:
        for _ in range(10):
            p = int(rng.integers(2, 50))
            pp = int(rng.integers(2, 50))
            if p % q == 0 or pp % qp == 0:
                continue
            a = int(rng.integers(-100, 100))
            want = crt_scan_brute(p, pp, a, q, qp)
            assert crt_residue(p, pp, a, q, qp) == want
            if q * qp <= 2000:
                assert crt_full_scan(p, pp, a, q, qp) == want


def test_reciprocity_examples():
    assert reciprocity_check(3, 5) == 1
    assert reciprocity_check(2, 3) == 1
    with pytest.raises(ValueError, match="coprime"):
        reciprocity_check(6, 9)
    with pytest.raises(ValueError):
        reciprocity_check(1, 5)


def test_reciprocity_random():
    rng = np.random.default_rng(9)
    done = 0
    while done < 2000:
        u = int(rng.integers(2, 10**9))
        v = int(rng.integers(2, 10**9))
        if math.gcd(u, v) != 1:
            continue
        reciprocity_check(u, v)  # raises on any defect
        done += 1


def test_phase_identity_exact_worked_example():
    spec = PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=11)
    chk = phase_identity_check(spec, 11, 13)
    assert chk.exact_equal
    assert isinstance(chk.exact_lhs, Fraction)
    assert chk.error_bound_ok


def test_phase_identity_h_zero_degenerate():
    chk = phase_identity_check(PhaseSpec(p=2, p_prime=3, a=1, h=0, Q=11), 11, 13)
    assert chk.post_lhs == 1 and chk.post_rhs == 1
    assert chk.exact_lhs == 0 and chk.exact_rhs == 0


def test_phase_identity_error_scan():
    # max |lhs - rhs| * Q^2 / |a h| stays below the recorded constant
    rng = np.random.default_rng(10)
    Q = 1000
    primes = primes_in(Q, 2 * Q)
    worst = 0.0
    for _ in range(10**3):
        q, qp = rng.choice(len(primes), size=2, replace=False)
        q, qp = primes[int(q)], primes[int(qp)]
        a = int(rng.integers(1, 10 * Q))
        h = int(rng.integers(1, 50))
        p, pp = 2, 3
        chk = phase_identity_check(PhaseSpec(p=p, p_prime=pp, a=a, h=h, Q=Q), q, qp)
        assert chk.exact_equal
        assert chk.error_bound_ok
        worst = max(worst, chk.post_error * Q**2 / abs(a * h))
    assert worst <= 2 * math.pi


def test_bilinear_sum_zero_coefficients():
    spec = PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=10, alpha={})
    assert bilinear_sum(spec) == 0


def test_bilinear_sum_brute_oracle_q10():
    spec = PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=10)
    primes = primes_in(10, 20)
    assert primes == [11, 13, 17, 19]
    got = bilinear_sum(spec)
    want = bilinear_sum_brute(2, 3, 1, 1, 10, primes)
    assert abs(got) <= 12
    assert got == pytest.approx(want, abs=1e-12)


def test_bilinear_sum_brute_oracle_q100():
    primes = primes_in(100, 200)
    spec = PhaseSpec(p=3, p_prime=7, a=2, h=2, Q=100)
    got = bilinear_sum(spec, primes)
    want = bilinear_sum_brute(3, 7, 2, 2, 100, primes)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_bilinear_sum_conjugation_symmetry():
    s_pos = bilinear_sum(PhaseSpec(p=2, p_prime=3, a=1, h=5, Q=30))
    s_neg = bilinear_sum(PhaseSpec(p=2, p_prime=3, a=1, h=-5, Q=30))
    assert s_neg == pytest.approx(s_pos.conjugate(), abs=1e-12)


def test_bilinear_sum_h_zero_aligns():
    primes = primes_in(30, 60)
    n = len(primes)
    s = bilinear_sum(PhaseSpec(p=2, p_prime=3, a=1, h=0, Q=30), primes)
    assert s == pytest.approx(n * (n - 1), abs=1e-9)
    assert abs(s) <= n * n


def test_bilinear_sum_too_few_primes():
    with pytest.raises(ValueError, match="at least two"):
        bilinear_sum(PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=10), primes=[11])


def test_coefficient_bound_validated():
    with pytest.raises(ValueError, match="exceeds 1"):
        PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=10, alpha={11: 2.0})
    with pytest.raises(ValueError, match="distinct"):
        PhaseSpec(p=2, p_prime=2, a=1, h=1, Q=10)


def test_cancellation_scan_small_grid():
    scan = cancellation_scan([30, 60, 120, 240], 2, 3, 1, 1)
    assert len(scan.rows) == 4
    assert scan.slope < 2
    for row in scan.rows:
        assert row.abs_sum <= row.trivial_bound
    assert scan.reference_slope == pytest.approx(2 - 1 / 20)
    with pytest.raises(ValueError, match="at least 4"):
        cancellation_scan([100], 2, 3, 1, 1)
    with pytest.raises(ValueError, match="insufficient primes"):
        cancellation_scan([30, 60, 120, 240], 2, 3, 1, 1, min_primes=500)


def test_cancellation_scan_random_coefficients_rootlike():
    rng = np.random.default_rng(11)
    rows = []
    for Q in (100, 200, 400, 800):
        ps = primes_in(Q, 2 * Q)
        alpha = {q: complex(np.exp(2j * np.pi * rng.random())) for q in ps}
        beta = {q: complex(np.exp(2j * np.pi * rng.random())) for q in ps}
        s = bilinear_sum(PhaseSpec(p=2, p_prime=3, a=1, h=1, Q=Q, alpha=alpha, beta=beta), ps)
        rows.append((np.log(Q), np.log(abs(s))))
    slope = np.polyfit([r[0] for r in rows], [r[1] for r in rows], 1)[0]
    assert slope < 2


def test_adversarial_vs_honest():
    adv = adversarial_assignment(50, 2, 3, 10**3, split="halves")
    primes = primes_in(50, 100)
    k = len(primes) // 2
    assert all(adv.assignment[q] == 2 for q in primes[:k])
    assert all(adv.assignment[q] == 3 for q in primes[k:])
    assert adv.ratio > 0
    honest = fixed_assignment_sum(50, 2, 3, 10**3, a=1)
    assert abs(honest.ratio) < adv.ratio
    alt = adversarial_assignment(50, 2, 3, 10**3, split="alternating")
    assert alt.ratio > 0
    with pytest.raises(ValueError, match="unknown split"):
        adversarial_assignment(50, 2, 3, 10**3, split="thirds")


def test_periodicity_cancels_full_periods_exactly():
    # every residue class appears exactly k times in k full periods, so the
    # count minus X/(qq') term vanishes exactly there
    from progdist.kloosterman import _progression_count

    for M in (3127, 53 * 97, 61 * 89):
        for r in (0, 1, 17, M - 1):
            for k in (1, 2, 7):
                assert _progression_count(r, M, k * M) == k


def test_adversarial_advantage_shrinks_past_full_periods():
    # once X exceeds every qq', the m = 1 conspiracy no longer beats the
    # honest assignment by the near-1-per-pair margin it enjoys at small X
    small_x = adversarial_assignment(50, 2, 3, 10**3)
    big_x = adversarial_assignment(50, 2, 3, 10**6)
    assert big_x.ratio < small_x.ratio


def test_adversarial_sum_exact_brute():
    # full brute force on a tiny window: count the m's directly
    Q, p, pp, X = 20, 2, 3, 300
    primes = primes_in(Q, 2 * Q)
    rep = adversarial_assignment(Q, p, pp, X, split="halves")
    total = Fraction(0)
    for q in primes:
        for qp in primes:
            cnt = 0
            for m in range(1, X + 1):
                if (p * m - rep.assignment[q]) % q == 0 and (
                    pp * m - rep.assignment[qp]
                ) % qp == 0:
                    cnt += 1
            total += cnt - Fraction(X, q * qp)
    assert rep.sum_exact == total


def test_post_reciprocity_sum_within_aggregate_bound():
    # replacing every phase by its modulus-flipped form moves the full sum
    # by at most sum over pairs of 2*pi*|a*h|/Q^2
    Q, p, pp, a, h = 50, 2, 3, 1, 1
    primes = primes_in(Q, 2 * Q)
    spec = PhaseSpec(p=p, p_prime=pp, a=a, h=h, Q=Q)
    direct = bilinear_sum(spec, primes)
    flipped = 0j
    pair_bound = 0.0
    for q in primes:
        for qp in primes:
            if q == qp:
                continue
            chk = phase_identity_check(spec, q, qp)
            flipped += chk.post_rhs
            pair_bound += chk.error_bound
    assert abs(direct - flipped) <= pair_bound
