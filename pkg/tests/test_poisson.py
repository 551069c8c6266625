import math

import numpy as np
import pytest
from scipy.integrate import quad

from progdist.poisson import (
    SUPPORTED_A,
    TailBoundError,
    adequate_H,
    bump,
    bump_cdf,
    bump_fourier,
    bump_normalization,
    cutoff_eval,
    fourier_decay_sup,
    fourier_W,
    fourier_W_direct,
    poisson_check,
    psi_derivative_l1,
    smooth_cutoff,
    truncation_budget,
    w_derivative_l1_bound,
)


def test_bump_support_and_peak():
    assert bump(1.0) == 0 and bump(-1.0) == 0
    assert bump(1.5) == 0 and bump(-7.0) == 0
    assert bump(0.0) == pytest.approx(bump_normalization() * math.exp(-1.0))
    x = np.linspace(-2, 2, 801)
    vals = bump(x)
    assert (vals >= 0).all()
    assert (vals[np.abs(x) >= 1] == 0).all()


def test_bump_mass_independent_quadrature():
    val, _ = quad(lambda t: bump(float(t)), -1, 1, epsabs=1e-13, limit=200)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_bump_cdf_against_quadrature():
    rng = np.random.default_rng(13)
    for T in [-1.0, -0.999, -0.5, 0.0, 0.3, 0.97, 1.0] + list(rng.uniform(-1, 1, 12)):
        direct, _ = quad(lambda t: bump(float(t)), -1, float(T), epsabs=1e-13, limit=200)
        assert bump_cdf(float(T)) == pytest.approx(direct, abs=1e-11)
    assert bump_cdf(-1.5) == 0.0 and bump_cdf(2.0) == 1.0
    assert bump_cdf(0.0) == pytest.approx(0.5, abs=1e-13)


def test_cutoff_flat_regions_exact():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    assert cutoff_eval(W, 0.5) == 1.0
    assert cutoff_eval(W, 0.16) == 1.0  # just past j_lo + 1/S
    assert cutoff_eval(W, 0.04) == 0.0
    assert cutoff_eval(W, 0.97) == 0.0
    assert cutoff_eval(W, -3.0) == 0.0


def test_cutoff_endpoint_half():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    assert cutoff_eval(W, 0.1) == pytest.approx(0.5, abs=1e-8)
    assert cutoff_eval(W, 0.9) == pytest.approx(0.5, abs=1e-8)


def test_cutoff_range_and_monotone_transitions():
    W = smooth_cutoff(0.3, 0.5, 10.0)
    x = np.linspace(-0.1, 1.1, 2401)
    vals = cutoff_eval(W, x)
    assert (vals >= 0).all() and (vals <= 1).all()
    rising = vals[(x >= 0.2) & (x <= 0.4)]
    assert (np.diff(rising) >= -1e-15).all()
    falling = vals[(x >= 0.4) & (x <= 0.6)]
    assert (np.diff(falling) <= 1e-15).all()


def test_cutoff_validation():
    with pytest.raises(ValueError):
        smooth_cutoff(0.5, 0.4, 10.0)
    with pytest.raises(ValueError):
        smooth_cutoff(-0.1, 0.5, 10.0)
    with pytest.raises(ValueError):
        smooth_cutoff(0.1, 0.9, 0.0)


def test_mass_preserved():
    for j_lo, j_hi, S in ((0.1, 0.9, 20.0), (0.3, 0.5, 10.0), (0.25, 0.3, 100.0)):
        W = smooth_cutoff(j_lo, j_hi, S)
        lo, hi = W.support()
        val, _ = quad(lambda t: cutoff_eval(W, float(t)), lo, hi, epsabs=1e-12, limit=400)
        assert val == pytest.approx(j_hi - j_lo, abs=1e-10)


def test_fourier_at_zero_exact():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    assert fourier_W(W, 0.0) == 0.8 + 0j


def test_fourier_hermitian_symmetry():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    for xi in (3.7, 55.0, 412.0):
        assert fourier_W(W, -xi) == np.conj(fourier_W(W, xi))


def test_fourier_two_quadrature_routes_agree():
    for j_lo, j_hi, S in ((0.1, 0.9, 20.0), (0.3, 0.5, 10.0)):
        W = smooth_cutoff(j_lo, j_hi, S)
        for xi in (0.9, 17.3, 160.0, 2400.0):
            a = fourier_W(W, xi)
            b = fourier_W_direct(W, xi)
            assert a == pytest.approx(b, abs=5e-9)


def test_fourier_decay_bound_holds():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    for A in (2, 3, 4):
        wa = w_derivative_l1_bound(W, A)
        for xi in np.geomspace(30, 3000, 25):
            assert abs(fourier_W(W, float(xi))) <= wa / xi**A * (1 + 1e-9)


def test_fourier_decay_constant_stable_in_sharpness():
    for A in (2, 3, 4):
        sups = []
        for S in (10.0, 20.0, 50.0):
            W = smooth_cutoff(0.1, 0.9, S)
            grid = S * np.geomspace(1.0, 40.0, 48)
            sups.append(fourier_decay_sup(W, A, grid))
        assert max(sups) / min(sups) < 3.0


def test_psi_derivative_l1_values():
    # ||Psi'||_1 == 2 Psi(0) since the bump has a single interior extremum
    assert psi_derivative_l1(1) == pytest.approx(2 * bump(0.0), rel=1e-12)
    for k in (2, 3, 4, 5):
        assert psi_derivative_l1(k) > psi_derivative_l1(k - 1)


def test_bump_fourier_matches_direct():
    for omega in (0.0, 1.3, 9.0):
        got, _ = bump_fourier(omega)
        want, _ = quad(
            lambda t: bump(float(t)) * math.cos(omega * t), -1, 1,
            epsabs=1e-13, limit=300,
        )
        assert got == pytest.approx(want, abs=1e-10)


def test_poisson_worked_example():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    chk = poisson_check(W, 100.0, 5, 2, 200)
    assert chk.diff < 1e-6
    assert chk.diff <= chk.tail_bound + chk.quad_budget + 1e-12


def test_poisson_degenerate_modulus_exactly_zero():
    W = smooth_cutoff(0.1, 0.9, 20.0)
    chk = poisson_check(W, 100.0, 1, 0, 5)
    assert chk.lhs == 0.0 and chk.rhs == 0j and chk.diff == 0.0
    assert chk.tail_bound == 0.0


def test_poisson_nontrivial_lhs():
    W = smooth_cutoff(0.3, 0.5, 10.0)
    chk = poisson_check(W, 10.0, 11, 3, adequate_H(W, 10.0, 11))
    assert abs(chk.lhs) > 0.05  # a genuinely nonzero case
    assert chk.diff <= chk.tail_bound + chk.quad_budget + 1e-12


def test_poisson_truncation_monotone():
    W = smooth_cutoff(0.1, 0.9, 10.0)
    H0 = adequate_H(W, 50.0, 5)
    for H in (H0, 2 * H0, 4 * H0):
        chk = poisson_check(W, 50.0, 5, 2, H)
        assert chk.diff <= chk.tail_bound + chk.quad_budget + 1e-12


def test_poisson_tail_unachievable_reports_minimal_H():
    W = smooth_cutoff(0.1, 0.9, 50.0)
    with pytest.raises(TailBoundError, match="minimal adequate H"):
        poisson_check(W, 10.0, 11, 3, 2)


def test_poisson_validation():
    W = smooth_cutoff(0.1, 0.9, 10.0)
    with pytest.raises(ValueError):
        poisson_check(W, -1.0, 5, 2, 10)
    with pytest.raises(ValueError):
        poisson_check(W, 10.0, 5, 7, 10)
    with pytest.raises(ValueError):
        poisson_check(W, 10.0, 5, 2, 0)


def test_truncation_budget():
    A, H = truncation_budget(1.0, 0.0, 100.0)
    assert A == 100
    assert H == pytest.approx(100.0 ** 0.4)
    assert truncation_budget(0.5, 0.0, 50.0)[0] == 200
    A2, H2 = truncation_budget(0.25, 0.1, 1000.0)
    assert H2 == pytest.approx(1000.0 ** (0.2 + 0.1))
    with pytest.raises(ValueError):
        truncation_budget(0.0, 0.0, 10.0)


def test_supported_orders_have_norms():
    W = smooth_cutoff(0.1, 0.9, 10.0)
    for A in SUPPORTED_A:
        assert w_derivative_l1_bound(W, A) > 0


def test_psi_derivative_l1_against_direct_integration():
    # the variation-based norms must match a brute numerical integral of
    # |Psi^(k)| (they feed rigorous tail bounds, so under-estimates matter)
    import sympy

    x = sympy.symbols("x")
    g = sympy.exp(-1 / (1 - x**2))
    for k in range(1, 6):
        fk = sympy.lambdify(x, sympy.diff(g, x, k), "numpy")
        t = np.linspace(-1 + 1e-9, 1 - 1e-9, 400001)
        with np.errstate(all="ignore"):
            vals = np.abs(np.nan_to_num(fk(t)))
        direct = bump_normalization() * np.trapezoid(vals, t)
        assert psi_derivative_l1(k) == pytest.approx(direct, rel=1e-4)
