import numpy as np
import pytest

from progdist.sieve import (
    WindowError,
    build_spf,
    factorize,
    mu2_range,
    mu2_range_array,
    omega_in_range,
    omega_range_array,
    primes_in,
    small_primes,
)

from oracles import factorize_trial, is_prime_trial, primes_trial_array, spf_trial


def test_build_spf_basics():
    t = build_spf(1, 11)
    assert t.spf_of(10) == 2
    assert t.spf_of(7) == 7
    assert t.spf_of(1) == 1
    assert t.spf.tolist() == [1, 2, 3, 2, 5, 2, 7, 2, 3, 2]


def test_build_spf_single_entry_sentinel():
    t = build_spf(1, 2)
    assert t.spf.tolist() == [1]


def test_build_spf_offset_window():
    t = build_spf(100, 101)
    assert t.spf_of(100) == 2


def test_build_spf_invalid_windows():
    with pytest.raises(WindowError):
        build_spf(5, 5)
    with pytest.raises(WindowError):
        build_spf(10, 4)
    with pytest.raises(WindowError):
        build_spf(0, 10)


def test_spf_table_immutable():
    t = build_spf(1, 100)
    with pytest.raises(ValueError):
        t.spf[0] = 99


def test_spf_matches_trial_division_sampled():
    t = build_spf(1, 20001)
    rng = np.random.default_rng(1)
    for n in list(range(1, 500)) + list(rng.integers(1, 20000, 300)):
        assert t.spf_of(int(n)) == spf_trial(int(n))


def test_spf_full_validation_vectorized():
    # spf divides n, is prime, and nothing smaller divides n
    N = 10**5
    t = build_spf(1, N + 1)
    n = np.arange(1, N + 1, dtype=np.int64)
    spf = t.spf.astype(np.int64)
    assert (n % spf == 0).all()
    is_p = primes_trial_array(N)
    assert is_p[spf[1:]].all()  # n >= 2 entries are prime
    for p in small_primes(400):
        p = int(p)
        assert (spf[p - 1 :: p] <= p).all()


def test_primes_in_examples():
    assert primes_in(10, 20) == [11, 13, 17, 19]
    assert primes_in(1, 2) == []
    assert primes_in(2, 3) == [2]
    with pytest.raises(WindowError):
        primes_in(7, 7)


def test_primes_in_vs_trial_oracle_exhaustive():
    N = 10**5
    got = np.zeros(N + 1, dtype=bool)
    got[primes_in(1, N + 1)] = True
    assert (got == primes_trial_array(N)).all()
    # scalar spot checks higher up
    for n in [10**6 + 3, 10**6 + 33, 999983]:
        assert (primes_in(n, n + 1) == [n]) == is_prime_trial(n)


def test_segmentation_invariance():
    whole = build_spf(1, 30000, segment_length=1 << 20).spf
    for seg in (997, 4096):
        assert (build_spf(1, 30000, segment_length=seg).spf == whole).all()
    # offset window agrees with the corresponding slice
    part = build_spf(12345, 23456, segment_length=1000).spf
    assert (part == whole[12344:23455]).all()


def test_factorize_examples():
    t = build_spf(1, 200)
    assert factorize(12, t).factors == ((2, 2), (3, 1))
    assert factorize(1, t).factors == ()
    assert factorize(97, t).factors == ((97, 1),)
    with pytest.raises(WindowError):
        factorize(500, t)


def test_factorize_reconstructs_exhaustive():
    N = 10**6
    t = build_spf(1, N + 1)
    step = 1  # full exhaustive pass
    for n in range(1, N + 1, step):
        fac = factorize(n, t)
        assert fac.value() == n
        ps = fac.distinct_primes()
        assert all(e >= 1 for _, e in fac.factors)
        assert list(ps) == sorted(ps)


def test_factorize_offset_window_falls_back():
    t = build_spf(10**6, 10**6 + 50)
    for n in range(10**6, 10**6 + 50):
        fac = factorize(n, t)
        assert fac.value() == n
        assert fac.factors == tuple(factorize_trial(n))


def test_omega_in_range_examples():
    t = build_spf(1, 200)
    assert omega_in_range(105, 3, 10, t) == 3
    assert omega_in_range(22, 3, 10, t) == 0
    assert omega_in_range(9, 3, 10, t) == 1
    with pytest.raises(WindowError):
        omega_in_range(1000, 3, 10, t)


def test_omega_in_range_is_divisibility_count():
    t = build_spf(1, 5001)
    for n in range(1, 5001, 17):
        direct = sum(
            1 for p in range(3, 30) if is_prime_trial(p) and n % p == 0
        )
        assert omega_in_range(n, 3, 30, t) == direct


def test_mu2_range_examples():
    t = build_spf(1, 200)
    assert mu2_range(9, 3, 10, t) == 0
    assert mu2_range(15, 3, 10, t) == 1
    assert mu2_range(45, 3, 10, t) == 0


def test_bulk_arrays_match_scalar_ops():
    X = 4000
    t = build_spf(1, X + 1)
    om = omega_range_array(X, 3, 30)
    m2 = mu2_range_array(X, 3, 30)
    for n in range(1, X + 1, 13):
        assert om[n] == omega_in_range(n, 3, 30, t)
        assert m2[n] == bool(mu2_range(n, 3, 30, t))
