"""Figure rendering for the report path: every CSV/JSON report gets a PNG
companion so scans can be eyeballed without a notebook."""

from __future__ import annotations

from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIG_SIZE = (6.4, 4.0)
DPI = 140


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.set_title(title, fontsize=10)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def discrepancy_figure(report, path: str) -> str:
    qs = [r.q for r in report.records]
    ds = [abs(r.D) for r in report.records]
    fig, ax = _new_axes(
        f"discrepancy scan: X={report.params.X}, a={report.params.a}",
        "modulus q", "|D(q, a)|",
    )
    ax.scatter(qs, ds, s=8)
    ax.axhline(report.params.eps, color="tab:red", lw=1,
               label=f"eps = {report.params.eps}")
    ax.legend(fontsize=8)
    return _save(fig, path)


def counterexample_figure(report, path: str) -> str:
    fig, ax = _new_axes(f"composite modulus bias: X={report.X}", "", "value")
    labels = ["|D(2,1)|", "|D(2,2)|", "|global mean|"]
    vals = [abs(report.D_odd), abs(report.D_even), abs(report.global_mean)]
    ax.bar(labels, vals, color=["tab:blue", "tab:blue", "tab:orange"])
    return _save(fig, path)


def moments_figure(rows, path: str) -> str:
    fig, ax = _new_axes("weight moments across the (Y, Z) grid", "u = log Z / log Y", "scaled moment")
    us = [r.u for r in rows]
    ax.plot(us, [r.second_scaled for r in rows], "o", label="E w^2 * (log u)^2")
    ax.plot(us, [r.fourth_scaled for r in rows], "s", label="E (X - mu)^4 / (log u)^2")
    ax.legend(fontsize=8)
    return _save(fig, path)


def decompose_figure(dec, path: str) -> str:
    fig, ax = _new_axes("bilinear decomposition", "", "magnitude")
    labels = ["|lhs|", "e_triv", "e_sieve", "e_bilinear"]
    vals = [abs(dec.lhs), dec.e_triv, dec.e_sieve, dec.e_bilinear]
    ax.bar(labels, vals, color=["tab:orange"] + ["tab:blue"] * 3)
    if dec.fitted_C is not None:
        ax.set_title(f"bilinear decomposition (fitted C = {dec.fitted_C:.3g})", fontsize=10)
    return _save(fig, path)


def sieve_count_figure(rows, path: str) -> str:
    fig, ax = _new_axes("rough-progression counts vs sieve main term", "modulus q", "ratio")
    ax.scatter([r["q"] for r in rows], [r["ratio"] for r in rows], s=12)
    ax.axhline(1.0, color="tab:gray", lw=1)
    return _save(fig, path)


def kloosterman_figure(scan, path: str) -> str:
    fig, ax = _new_axes(
        f"bilinear phase-sum cancellation (fitted slope {scan.slope:.3f})",
        "Q", "|Sigma|",
    )
    qs = np.array([r.Q for r in scan.rows], dtype=float)
    ax.loglog(qs, [r.abs_sum for r in scan.rows], "o", label="measured |Sigma|")
    anchor = scan.rows[0].abs_sum
    for slope, style, label in (
        (scan.trivial_slope, "--", "slope 2 (trivial)"),
        (scan.reference_slope, ":", f"slope {scan.reference_slope:.2f}"),
        (scan.slope, "-", "fit"),
    ):
        ax.loglog(qs, anchor * (qs / qs[0]) ** slope, style, lw=1, label=label)
    ax.legend(fontsize=8)
    return _save(fig, path)


def adversarial_figure(adv, honest, path: str) -> str:
    fig, ax = _new_axes(
        f"residue-assignment obstruction: Q={adv.Q}, X={adv.X}", "", "sum / Q^2"
    )
    ax.bar([adv.variant, honest.variant], [adv.ratio, honest.ratio],
           color=["tab:red", "tab:blue"])
    return _save(fig, path)


def poisson_figure(rows, path: str) -> str:
    fig, ax = _new_axes("truncated dual-sum identity", "case", "absolute error")
    idx = np.arange(len(rows))
    diffs = [max(r["diff"], 1e-18) for r in rows]
    tails = [max(r["tail_bound"], 1e-18) for r in rows]
    ax.semilogy(idx, diffs, "o", label="|lhs - rhs|")
    ax.semilogy(idx, tails, "_", ms=12, label="tail bound")
    ax.legend(fontsize=8)
    return _save(fig, path)


def fourier_grid_figure(rows, path: str, A: Optional[int] = None) -> str:
    fig, ax = _new_axes("cutoff transform decay", "xi", "|W_hat(xi)|")
    xi = [r["xi"] for r in rows]
    ax.loglog(xi, [max(r["abs"], 1e-18) for r in rows], "o", ms=3, label="|W_hat|")
    ax.loglog(xi, [r["bound"] for r in rows], "-", lw=1,
              label=f"derivative bound (A={A})" if A else "derivative bound")
    ax.legend(fontsize=8)
    return _save(fig, path)
