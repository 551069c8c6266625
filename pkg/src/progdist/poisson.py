"""Smoothed interval cutoff, its Fourier transform, and the truncated
Poisson-summation identity for progressions.

The mollifier is the standard normalized bump exp(-1/(1-x^2)) on (-1, 1).
W is the convolution of an interval indicator 1_J with the bump scaled to
width 2/S, evaluated through the bump's CDF so the flat regions are exact
0 or 1 with no quadrature.  Fourier convention: Hat(g)(xi) = integral of
g(x) e^(-i xi x) dx, and the summation identity reads

    sum_m W(m/L) (1_{m == b (d)} - 1/d)
        = (L/d) * sum_{h != 0 (mod d)} Hat(W)(2 pi L h / d) e(b h / d),

where the h-sum excludes ALL multiples of d (the progression transform and
the 1/d average transform cancel termwise there; for d = 1 both sides are
identically zero).  Truncating at |h| <= H leaves a tail controlled by the
derivative-norm decay |Hat(W)(xi)| <= ||W^(A)||_1 |xi|^(-A).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from scipy.integrate import quad

_PANELS = 512
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_EDGES = np.linspace(-1.0, 1.0, _PANELS + 1)

SUPPORTED_A = (2, 3, 4, 5, 6)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge; carries the achieved error."""


class TailBoundError(ValueError):
    """Requested truncation cannot reach the tolerance; carries minimal H."""


def _bump_raw(t):
    """exp(-1/(1-t^2)) on (-1, 1), 0 outside; array or scalar."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ti * ti))
    return out


@lru_cache(maxsize=1)
def _panel_table() -> Tuple[np.ndarray, float]:
    """Cumulative panel integrals of the raw bump on the fixed subdivision."""
    half = np.diff(_EDGES) / 2.0
    mids = (_EDGES[:-1] + _EDGES[1:]) / 2.0
    pts = mids[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = _bump_raw(pts) * _GL_WEIGHTS[None, :] * half[:, None]
    per_panel = vals.sum(axis=1)
    cum = np.concatenate([[0.0], np.cumsum(per_panel)])
    return cum, float(cum[-1])


@lru_cache(maxsize=1)
def bump_mass_raw() -> float:
    """Integral of the raw bump on the fixed panel rule, cross-checked
    against adaptive quadrature (relative 1e-13)."""
    val, err = quad(lambda t: math.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0,
                    epsabs=1e-15, epsrel=1e-13, limit=200)
    if err > 1e-11:
        raise QuadratureError(f"bump mass quadrature error {err:.3e}")
    cum_total = _panel_table()[1]
    if abs(cum_total - val) > 1e-11:
        raise QuadratureError(
            f"quadrature rules disagree on the bump mass: {val!r} vs {cum_total!r}"
        )
    return cum_total


def bump_normalization() -> float:
    """c with c * integral exp(-1/(1-x^2)) dx = 1.

    Normalized against the panel rule so the bump CDF reaches exactly 1.
    """
    return 1.0 / bump_mass_raw()


def bump(x):
    """Normalized bump: c * exp(-1/(1-x^2)) for |x| < 1, else 0."""
    c = bump_normalization()
    out = c * _bump_raw(x)
    return float(out) if np.isscalar(x) else out


def bump_cdf(T):
    """Phi(T) = integral of the normalized bump over (-inf, T], vectorized."""
    scalar = np.isscalar(T)
    T = np.atleast_1d(np.asarray(T, dtype=np.float64))
    Tc = np.clip(T, -1.0, 1.0)
    cum, _total = _panel_table()
    k = np.clip(np.searchsorted(_EDGES, Tc, side="right") - 1, 0, _PANELS - 1)
    lo = _EDGES[k]
    half = (Tc - lo) / 2.0
    pts = lo[:, None] + half[:, None] * (_GL_NODES[None, :] + 1.0)
    partial = (_bump_raw(pts) * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    out = np.clip((cum[k] + partial) * bump_normalization(), 0.0, 1.0)
    out[T <= -1.0] = 0.0
    out[T >= 1.0] = 1.0
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class SmoothCutoff:
    """Mollified indicator of J = [j_lo, j_hi] at transition width 2/sharpness."""

    j_lo: float
    j_hi: float
    sharpness: float
    psi_normalization: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.j_lo < self.j_hi <= 1.0:
            raise ValueError(f"J=[{self.j_lo}, {self.j_hi}] must sit inside [0, 1]")
        if self.sharpness <= 0:
            raise ValueError(f"sharpness must be positive, got {self.sharpness}")
        if self.psi_normalization == 0.0:
            object.__setattr__(self, "psi_normalization", bump_normalization())

    @property
    def width(self) -> float:
        return self.j_hi - self.j_lo

    def support(self) -> Tuple[float, float]:
        s = 1.0 / self.sharpness
        return self.j_lo - s, self.j_hi + s


def smooth_cutoff(j_lo: float, j_hi: float, sharpness: float) -> SmoothCutoff:
    return SmoothCutoff(j_lo=j_lo, j_hi=j_hi, sharpness=sharpness)


def cutoff_eval(W: SmoothCutoff, x):
    """W(x) = Phi(S(x - j_lo)) - Phi(S(x - j_hi)); exact 0/1 in the flat
    regions without quadrature."""
    S = W.sharpness
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    t1 = S * (x - W.j_lo)
    t2 = S * (x - W.j_hi)
    out = np.zeros(len(x), dtype=np.float64)
    flat_one = (t1 >= 1.0) & (t2 <= -1.0)
    out[flat_one] = 1.0
    mid = ~flat_one & (t1 > -1.0) & (t2 < 1.0)
    if mid.any():
        out[mid] = bump_cdf(t1[mid]) - bump_cdf(t2[mid])
    return float(out[0]) if scalar else out


def _quad_checked(fn, lo, hi, what, **kw):
    res = quad(fn, lo, hi, full_output=1, **kw)
    if len(res) > 3:
        raise QuadratureError(
            f"{what}: quadrature did not converge (achieved error {res[1]:.3e}): {res[3]}"
        )
    return res[0], res[1]


_OSC_MAX_PANELS = 1 << 18


def _osc_panels(f, lo: float, hi: float, xi: float, n: int) -> complex:
    edges = np.linspace(lo, hi, n + 1)
    mids = (edges[:-1] + edges[1:]) / 2.0
    half = (hi - lo) / (2.0 * n)
    pts = (mids[:, None] + half * _GL_NODES[None, :]).ravel()
    vals = f(pts) * np.exp(-1j * xi * pts)
    return complex((vals.reshape(n, -1) @ _GL_WEIGHTS).sum() * half)


def osc_quad(f, lo: float, hi: float, xi: float,
             min_panels: int = 16) -> Tuple[complex, float]:
    """integral of f(x) e^(-i xi x) over [lo, hi] on a fixed subdivision
    fine enough for the oscillation (at most half a period per panel), with
    the half-resolution difference as the error estimate.

    f must accept numpy arrays.  Deterministic by construction; used instead
    of adaptive oscillatory quadrature, which can fail silently here.
    """
    if hi <= lo:
        return 0j, 0.0
    n = max(min_panels, math.ceil(abs(xi) * (hi - lo) / math.pi))
    if n > _OSC_MAX_PANELS:
        raise QuadratureError(
            f"oscillatory quadrature needs {n} panels (> {_OSC_MAX_PANELS})"
        )
    fine = _osc_panels(f, lo, hi, xi, n)
    coarse = _osc_panels(f, lo, hi, xi, max(1, n // 2))
    err = abs(fine - coarse) + 1e-16 * (hi - lo)
    return fine, err


def bump_fourier(omega: float) -> Tuple[float, float]:
    """(value, error) of Hat(Psi)(omega), real and even by symmetry.

    Large |omega| short-circuits to 0 once the derivative-norm decay bound
    drops below working precision.
    """
    if omega == 0.0:
        return 1.0, 0.0
    omega = abs(omega)
    decay = min(
        psi_derivative_l1(k) / omega**k for k in range(1, _PSI_L1_MAX_ORDER + 1)
    )
    if decay < 1e-15:
        return 0.0, decay
    val, err = osc_quad(bump, -1.0, 1.0, omega, min_panels=32)
    return val.real, err + abs(val.imag)


def _indicator_transform(W: SmoothCutoff, xi: float) -> complex:
    """Hat(1_J)(xi) = (e^{-i xi j_lo} - e^{-i xi j_hi}) / (i xi), exact."""
    return (cmath.exp(-1j * xi * W.j_lo) - cmath.exp(-1j * xi * W.j_hi)) / (1j * xi)


def fourier_W_with_error(W: SmoothCutoff, xi: float) -> Tuple[complex, float]:
    """Hat(W)(xi) and an absolute error estimate.

    W is exactly the convolution 1_J * (S Psi(S .)), so its transform
    factors as Hat(1_J)(xi) * Hat(Psi)(xi / S); the bump factor is the one
    adaptive quadrature.  Hat(W)(0) = |J| exactly.
    """
    if xi == 0.0:
        return complex(W.width), 0.0
    ind = _indicator_transform(W, xi)
    psi_hat, err = bump_fourier(xi / W.sharpness)
    return ind * psi_hat, abs(ind) * err


def fourier_W(W: SmoothCutoff, xi: float) -> complex:
    return fourier_W_with_error(W, xi)[0]


def fourier_W_direct(W: SmoothCutoff, xi: float) -> complex:
    """Hat(W)(xi) by direct region-split quadrature of W itself: the flat
    plateau integrates in closed form, the transitions on the oscillatory
    panel rule.  Kept as the second route for cross-checking the factorized
    transform."""
    if xi == 0.0:
        lo, hi = W.support()
        val, _ = _quad_checked(lambda x: cutoff_eval(W, x), lo, hi,
                               what="direct transform", epsabs=1e-12, limit=400)
        return complex(val)
    s = 1.0 / W.sharpness
    regions = []
    if W.j_lo + s < W.j_hi - s:
        regions.append((W.j_lo - s, W.j_lo + s, None))
        regions.append((W.j_lo + s, W.j_hi - s, "flat"))
        regions.append((W.j_hi - s, W.j_hi + s, None))
    else:
        regions.append((W.j_lo - s, W.j_hi + s, None))
    total = 0j
    for lo, hi, kind in regions:
        if kind == "flat":
            total += (cmath.exp(-1j * xi * lo) - cmath.exp(-1j * xi * hi)) / (1j * xi)
            continue
        val, _ = osc_quad(lambda x: cutoff_eval(W, x), lo, hi, xi, min_panels=64)
        total += val
    return total


# --- derivative norms for the decay bound -------------------------------

_PSI_L1_MAX_ORDER = 5  # supports decay orders A = 2..6


@lru_cache(maxsize=None)
def psi_derivative_l1(k: int) -> float:
    """||Psi^(k)||_1 as the total variation of Psi^(k-1), via the exact
    critical points of the rational cofactor in Psi^(k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    import sympy

    x = sympy.symbols("x")
    g = sympy.exp(-1 / (1 - x**2))
    dk = sympy.diff(g, x, k)
    ratio = sympy.simplify(sympy.cancel(dk / g))
    num, _den = sympy.fraction(sympy.together(ratio))
    coeffs = [float(c) for c in sympy.Poly(num, x).all_coeffs()]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    crit = sorted(
        float(r.real)
        for r in roots
        if abs(r.imag) < 1e-9 and -1 < r.real < 1
    )
    prev = sympy.lambdify(x, sympy.diff(g, x, k - 1), "math")
    points = [-1.0] + crit + [1.0]
    values = [0.0] + [prev(t) for t in crit] + [0.0]
    tv = sum(abs(values[i + 1] - values[i]) for i in range(len(values) - 1))
    return bump_normalization() * tv


def w_derivative_l1_bound(W: SmoothCutoff, A: int) -> float:
    """Upper bound 2 S^(A-1) ||Psi^(A-1)||_1 for ||W^(A)||_1."""
    if A < 2:
        raise ValueError("A must be >= 2")
    return 2.0 * W.sharpness ** (A - 1) * psi_derivative_l1(A - 1)


def fourier_decay_sup(W: SmoothCutoff, A: int, xi_grid: Sequence[float]) -> float:
    """sup over the grid of |Hat(W)(xi)| |xi|^A S^(1-A)."""
    S = W.sharpness
    return max(
        abs(fourier_W(W, float(xi))) * abs(xi) ** A * S ** (1 - A) for xi in xi_grid
    )


# --- Poisson identity ----------------------------------------------------

@dataclass(frozen=True)
class PoissonCheck:
    L: float
    d: int
    b: int
    H: int
    lhs: float
    rhs: complex
    diff: float
    tail_bound: float
    A_used: int
    quad_budget: float

    @property
    def within_bound(self) -> bool:
        return self.diff <= self.tail_bound + self.quad_budget + 1e-12


def _tail_bound(W: SmoothCutoff, L: float, d: int, H: int, A: int) -> float:
    """Bound on (L/d) sum_{|h| > H} |Hat(W)(2 pi L h / d)| via the
    derivative-norm decay and an integral tail estimate."""
    wa = w_derivative_l1_bound(W, A)
    return (L / d) * 2.0 * wa * (d / (2 * math.pi * L)) ** A * H ** (1 - A) / (A - 1)


def _minimal_H(W: SmoothCutoff, L: float, d: int, tol: float) -> int:
    best = math.inf
    for A in SUPPORTED_A:
        wa = w_derivative_l1_bound(W, A)
        hA = ((L / d) * 2.0 * wa * (d / (2 * math.pi * L)) ** A / ((A - 1) * tol)) ** (
            1 / (A - 1)
        )
        best = min(best, hA)
    return max(1, math.ceil(best))


def poisson_check(
    W: SmoothCutoff, L: float, d: int, b: int, H: int, tol: float = 1e-8
) -> PoissonCheck:
    """Both sides of the truncated summation identity and the error budget.

    lhs sums exactly over the compact support of W(./L); rhs truncates the
    dual sum at |h| <= H, skipping h == 0 (mod d).  The truncation order A
    is chosen among the supported values to push the tail below tol; if no
    choice works the error names the minimal adequate H.  Raises if the
    observed difference exceeds tail + quadrature budget.
    """
    if L <= 0:
        raise ValueError(f"L must be positive, got {L}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not 0 <= b < d:
        raise ValueError(f"need 0 <= b < d, got b={b}, d={d}")
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")

    if d == 1:
        tail, A_used = 0.0, SUPPORTED_A[0]
    else:
        tail, A_used = min((_tail_bound(W, L, d, H, A), A) for A in SUPPORTED_A)
        if tail > tol:
            raise TailBoundError(
                f"tail bound {tail:.3e} exceeds tol={tol:.1e} at H={H}; "
                f"minimal adequate H is about {_minimal_H(W, L, d, tol)}"
            )

    lo_s, hi_s = W.support()
    m_lo = math.ceil(L * lo_s)
    m_hi = math.floor(L * hi_s)
    m = np.arange(m_lo, m_hi + 1, dtype=np.int64)
    wvals = cutoff_eval(W, m / L)
    indicator = (np.mod(m, d) == b).astype(np.float64)
    lhs = float((wvals * (indicator - 1.0 / d)).sum())
    budget = len(m) * 1e-12

    acc = 0j
    for h in range(1, H + 1):
        if h % d == 0:
            continue
        xi = 2.0 * math.pi * L * h / d
        wh, err = fourier_W_with_error(W, xi)
        phase = cmath.exp(2j * math.pi * ((b * h) % d) / d)
        term = wh * phase
        acc += term + term.conjugate()
        budget += (L / d) * 2.0 * err
    rhs = (L / d) * acc
    diff = abs(lhs - rhs)
    check = PoissonCheck(
        L=L, d=d, b=b, H=H, lhs=lhs, rhs=rhs, diff=diff,
        tail_bound=tail, A_used=A_used, quad_budget=budget,
    )
    if not check.within_bound:
        raise AssertionError(
            f"summation identity violated: |lhs-rhs|={diff:.3e} > "
            f"tail {tail:.3e} + budget {budget:.3e}"
        )
    return check


def adequate_H(W: SmoothCutoff, L: float, d: int, tol: float = 1e-8) -> int:
    """Smallest H whose best-A tail bound meets tol."""
    if d == 1:
        return 1
    return _minimal_H(W, L, d, tol)


def truncation_budget(sigma: float, eta: float, X: float) -> Tuple[int, float]:
    """(A, H) = (ceil(100/sigma), X^(2 eta + 2 sigma / 5))."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return math.ceil(100.0 / sigma), X ** (2.0 * eta + 2.0 * sigma / 5.0)
