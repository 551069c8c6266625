"""Command-line surface: reproducible experiment runs with CSV + JSON
output, a PNG figure alongside every report, and config-file support.

Resolution order for every field: built-in default, then --config JSON,
then explicit flags.  The resolved config is embedded in the JSON sidecar
so outputs carry their provenance.  Outputs are byte-identical for equal
configs and seeds at any thread count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, bilinear, discrepancy, figures, kloosterman, multfn
from . import poisson as poisson_mod
from . import ramare
from .sieve import primes_in

THREADS_ENV = "PROGDIST_THREADS"

DEFAULT_MOMENT_GRID = [
    [2, 4, 4**8],
    [2, 5, 5**8],
    [2, 8, 8**8],
    [3, 9, 9**8],
    [4, 16, 10**7],
    [5, 25, 10**7],
    [3, 27, 10**7],
    [2, 16, 10**7],
    [2, 32, 10**7],
    [2, 256, 10**7],
]


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Field:
    name: str
    ftype: str  # int | float | str | bool | int_list | triple_list | case_list
    default: object
    help: str = ""
    choices: Optional[Tuple[str, ...]] = None


SCHEMAS: Dict[str, List[Field]] = {
    "discrepancy": [
        Field("f", "str", "liouville", "multiplicative function", multfn.BUILTIN_NAMES),
        Field("x", "int", 100000, "range limit X"),
        Field("q", "int", 350, "modulus window start Q (scan covers [Q, 2Q))"),
        Field("a", "int", 1, "residue a (nonzero, negatives allowed)"),
        Field("eps", "float", 0.1, "exceptional-set threshold"),
        Field("sigma", "float", 0.05, "regime parameter sigma"),
        Field("c_fit", "float", 0.0, "constant for the reference bound (0 = skip)"),
        Field("segment_length", "int", 1 << 20, "sieve segment length"),
    ],
    "counterexample": [
        Field("f", "str", "parity_squarefree", "multiplicative function", multfn.BUILTIN_NAMES),
        Field("x", "int", 10**6, "range limit X"),
    ],
    "ramare-moments": [
        Field("grid", "triple_list", DEFAULT_MOMENT_GRID, "Y:Z:M triples"),
    ],
    "decompose": [
        Field("f", "str", "mobius", "multiplicative function", multfn.BUILTIN_NAMES),
        Field("x", "int", 100000, "range limit X"),
        Field("q", "int", 350, "modulus window start Q"),
        Field("a", "int", 1, "residue a"),
        Field("y", "int", 3, "lower sieve parameter Y"),
        Field("z", "int", 30, "upper sieve parameter Z"),
        Field("xi_mode", "str", "aligned", "coefficient choice", ("aligned", "ones")),
        Field("subintervals", "int", 8, "subinterval endpoints per range"),
    ],
    "sieve-count": [
        Field("x", "int", 100000, "range limit X"),
        Field("q_grid", "int_list", [101, 211, 401, 809, 1009], "moduli"),
        Field("a", "int", 1, "residue a"),
        Field("y", "int", 3, "lower sieve parameter Y"),
        Field("z", "int", 30, "upper sieve parameter Z"),
    ],
    "kloosterman": [
        Field("q_grid", "int_list", [200, 400, 800, 1600, 3200], "grid of Q values"),
        Field("p", "int", 2, "first inner prime"),
        Field("pp", "int", 3, "second inner prime"),
        Field("a", "int", 1, "residue a"),
        Field("h", "int", 1, "frequency h"),
        Field("alpha", "str", "ones", "alpha coefficients", ("ones", "random")),
        Field("beta", "str", "ones", "beta coefficients", ("ones", "random")),
        Field("min_primes", "int", 2, "minimum primes per grid point"),
    ],
    "adversarial": [
        Field("q", "int", 200, "modulus window start Q"),
        Field("p", "int", 2, "first inner prime"),
        Field("pp", "int", 3, "second inner prime"),
        Field("x", "int", 10**4, "range limit X"),
        Field("split", "str", "halves", "adversarial split", ("halves", "alternating")),
        Field("honest_a", "int", 1, "residue for the honest comparison"),
    ],
    "poisson-check": [
        Field("mode", "str", "identity", "report type", ("identity", "fourier")),
        Field("cases", "case_list",
              [[100.0, 5, 2, 0.1, 0.9, 20.0, 0]],
              "identity cases L:d:b:j_lo:j_hi:S:H (H=0 picks the adequate H)"),
        Field("j_lo", "float", 0.1, "fourier mode: interval start"),
        Field("j_hi", "float", 0.9, "fourier mode: interval end"),
        Field("sharpness", "float", 20.0, "fourier mode: transition sharpness S"),
        Field("decay_a", "int", 3, "fourier mode: decay order A"),
        Field("xi_count", "int", 48, "fourier mode: grid size"),
        Field("xi_max_mult", "float", 40.0, "fourier mode: grid spans [S, mult*S]"),
    ],
}


def _type_error(sub: str, name: str, expected: str, got) -> CliError:
    return CliError(
        f"config field '{sub}.{name}': expected {expected}, got {json.dumps(got)}"
    )


def _coerce(sub: str, field: Field, value):
    t = field.ftype
    if t == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise _type_error(sub, field.name, "integer", value)
        return value
    if t == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _type_error(sub, field.name, "number", value)
        return float(value)
    if t == "str":
        if not isinstance(value, str):
            raise _type_error(sub, field.name, "string", value)
        if field.choices and value not in field.choices:
            raise CliError(
                f"config field '{sub}.{field.name}': {value!r} not one of {field.choices}"
            )
        return value
    if t == "int_list":
        if isinstance(value, str):
            try:
                value = [int(tok) for tok in value.split(",") if tok]
            except ValueError:
                raise _type_error(sub, field.name, "comma-separated integers", value)
        if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            raise _type_error(sub, field.name, "list of integers", value)
        return value
    if t == "triple_list":
        if isinstance(value, str):
            try:
                value = [[int(x) for x in tok.split(":")] for tok in value.split(",") if tok]
            except ValueError:
                raise _type_error(sub, field.name, "Y:Z:M triples", value)
        ok = isinstance(value, list) and all(
            isinstance(t3, list) and len(t3) == 3 and all(isinstance(v, int) for v in t3)
            for t3 in value
        )
        if not ok:
            raise _type_error(sub, field.name, "list of [Y, Z, M] triples", value)
        return value
    if t == "case_list":
        if isinstance(value, str):
            try:
                value = [[float(x) for x in tok.split(":")] for tok in value.split(",") if tok]
            except ValueError:
                raise _type_error(sub, field.name, "L:d:b:j_lo:j_hi:S:H cases", value)
        ok = isinstance(value, list) and all(
            isinstance(c, list) and len(c) == 7 for c in value
        )
        if not ok:
            raise _type_error(sub, field.name, "list of 7-entry cases", value)
        return [[float(v) for v in c] for c in value]
    raise AssertionError(f"unhandled field type {t}")


def resolve_config(sub: str, file_cfg: dict, flag_cfg: dict) -> dict:
    schema = {f.name: f for f in SCHEMAS[sub]}
    for key in file_cfg:
        if key not in schema:
            raise CliError(f"config field '{sub}.{key}': unknown field")
    out = {}
    for name, field in schema.items():
        value = field.default
        if name in file_cfg:
            value = _coerce(sub, field, file_cfg[name])
        if flag_cfg.get(name) is not None:
            value = _coerce(sub, field, flag_cfg[name])
        out[name] = value
    return out


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def write_outputs(
    out_path: Path,
    header: Sequence[str],
    rows: Sequence[Sequence],
    summary: dict,
    resolved: dict,
    figure_cb: Optional[Callable[[str], str]],
    render_figures: bool,
) -> List[str]:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    written.append(str(out_path))
    json_path = out_path.with_suffix(".json")
    payload = {
        "tool": f"progdist {__version__}",
        "config": resolved,
        "summary": summary,
        "records": [dict(zip(header, row)) for row in rows],
    }
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, allow_nan=True, default=_json_default)
        fh.write("\n")
    written.append(str(json_path))
    if figure_cb is not None and render_figures:
        written.append(figure_cb(str(out_path.with_suffix(".png"))))
    return written


def _c_parts(z: complex) -> Tuple[float, float]:
    z = complex(z)
    return z.real, z.imag


# --- subcommand runners ---------------------------------------------------

def run_discrepancy(cfg, common):
    f = multfn.builtin(cfg["f"], seed=common["seed"])
    params = discrepancy.Params(
        X=cfg["x"], Q=cfg["q"], a=cfg["a"], eps=cfg["eps"], sigma=cfg["sigma"]
    )
    report = discrepancy.scan(
        f,
        params,
        segment_length=cfg["segment_length"],
        threads=common["threads"],
        strict=common["strict"],
    )
    header = ["q", "a", "re_D", "im_D", "abs_D", "terms"]
    rows = [
        [r.q, r.a_reduced, r.D.real, r.D.imag, abs(r.D), r.terms]
        for r in report.records
    ]
    gm_re, gm_im = _c_parts(report.global_mean)
    summary = {
        "n_moduli": len(report.records),
        "exceptional_count": report.exceptional_count,
        "exceptional_fraction": report.exceptional_fraction(),
        "global_mean_re": gm_re,
        "global_mean_im": gm_im,
        "eta": params.eta,
    }
    if cfg["c_fit"] > 0:
        summary["reference_bound"] = discrepancy.exceptional_bound(params, cfg["c_fit"])
    line = (
        f"discrepancy: f={cfg['f']} X={cfg['x']} Q={cfg['q']} -> "
        f"{report.exceptional_count}/{len(report.records)} exceptional at eps={cfg['eps']}"
    )
    return header, rows, summary, lambda p: figures.discrepancy_figure(report, p), line


def run_counterexample(cfg, common):
    f = multfn.builtin(cfg["f"], seed=common["seed"])
    rep = discrepancy.composite_counterexample(cfg["x"], f=f)
    header = [
        "x", "re_mean_odd", "im_mean_odd", "re_mean_even", "im_mean_even",
        "re_global_mean", "im_global_mean", "abs_D_odd", "abs_D_even",
    ]
    rows = [[
        rep.X, *_c_parts(rep.mean_odd), *_c_parts(rep.mean_even),
        *_c_parts(rep.global_mean), abs(rep.D_odd), abs(rep.D_even),
    ]]
    summary = {
        "function": rep.function,
        "abs_D_odd": abs(rep.D_odd),
        "abs_D_even": abs(rep.D_even),
        "abs_global_mean": abs(rep.global_mean),
    }
    line = (
        f"counterexample: f={cfg['f']} X={cfg['x']} |D(2,1)|={abs(rep.D_odd):.4f} "
        f"|mean|={abs(rep.global_mean):.4f}"
    )
    return header, rows, summary, lambda p: figures.counterexample_figure(rep, p), line


def run_ramare_moments(cfg, common):
    reports = []
    for Y, Z, M in cfg["grid"]:
        reports.append(ramare.moment_report(M, Y, Z, strict=common["strict"]))
    header = ["M", "Y", "Z", "u", "mertens", "second_moment", "fourth_centered",
              "log_u", "regime"]
    rows = [
        [r.M, r.Y, r.Z, r.u, r.mertens, r.second_moment, r.fourth_centered,
         r.log_u, "strict" if r.strict_regime else "relaxed"]
        for r in reports
    ]
    sec = [r.second_scaled for r in reports]
    fou = [r.fourth_scaled for r in reports]
    summary = {
        "n_points": len(reports),
        "second_scaled_max_over_min": max(sec) / min(sec),
        "fourth_scaled_max_over_min": max(fou) / min(fou),
    }
    line = (
        f"ramare-moments: {len(reports)} grid points, scaled spreads "
        f"{summary['second_scaled_max_over_min']:.2f}x / "
        f"{summary['fourth_scaled_max_over_min']:.2f}x"
    )
    return header, rows, summary, lambda p: figures.moments_figure(reports, p), line


def run_decompose(cfg, common):
    f = multfn.builtin(cfg["f"], seed=common["seed"])
    X, Q, a = cfg["x"], cfg["q"], cfg["a"]
    qs = primes_in(Q, 2 * Q)
    if cfg["xi_mode"] == "ones":
        xi = {q: 1.0 + 0j for q in qs}
    else:
        xi = bilinear.align_xi(f, X, Q, a, qs)
    F = bilinear.make_progression_F(Q, a, xi)
    dec = bilinear.decompose(
        f, F, X, cfg["y"], cfg["z"],
        policy=bilinear.IntervalPolicy(subintervals=cfg["subintervals"]),
        strict=common["strict"],
    )
    header = ["x", "q", "a", "y", "z", "re_lhs", "im_lhs", "abs_lhs",
              "e_triv", "e_sieve", "e_bilinear", "fitted_C", "F_inf"]
    rows = [[
        X, Q, a, cfg["y"], cfg["z"], *_c_parts(dec.lhs), abs(dec.lhs),
        dec.e_triv, dec.e_sieve, dec.e_bilinear, dec.fitted_C, dec.F_inf,
    ]]
    summary = {
        "lhs_re": dec.lhs.real,
        "lhs_im": dec.lhs.imag,
        "e_triv": dec.e_triv,
        "e_sieve": dec.e_sieve,
        "e_bilinear": dec.e_bilinear,
        "fitted_C": dec.fitted_C,
        "F_inf": dec.F_inf,
    }
    line = (
        f"decompose: f={cfg['f']} X={X} |lhs|={abs(dec.lhs):.3e} vs "
        f"errors {dec.error_total:.3e} (C={dec.fitted_C})"
    )
    return header, rows, summary, lambda p: figures.decompose_figure(dec, p), line


def run_sieve_count(cfg, common):
    rows_data = []
    for q in cfg["q_grid"]:
        count, ratio = bilinear.sieve_count(
            cfg["x"], q, cfg["a"], cfg["y"], cfg["z"], strict=common["strict"]
        )
        rows_data.append({"q": q, "count": count, "ratio": ratio})
    header = ["x", "q", "a", "y", "z", "count", "ratio"]
    rows = [
        [cfg["x"], r["q"], cfg["a"], cfg["y"], cfg["z"], r["count"], r["ratio"]]
        for r in rows_data
    ]
    ratios = [r["ratio"] for r in rows_data]
    summary = {"n_moduli": len(rows_data), "ratio_min": min(ratios), "ratio_max": max(ratios)}
    line = (
        f"sieve-count: {len(rows_data)} moduli, ratio in "
        f"[{min(ratios):.3f}, {max(ratios):.3f}]"
    )
    return header, rows, summary, lambda p: figures.sieve_count_figure(rows_data, p), line


def _random_unimodular(qs, seed: int, label: str) -> dict:
    rng = np.random.default_rng([seed, sum(ord(c) for c in label)])
    return {q: complex(np.exp(2j * np.pi * rng.random())) for q in qs}


def run_kloosterman(cfg, common):
    grid = cfg["q_grid"]
    random_coeffs = cfg["alpha"] == "random" or cfg["beta"] == "random"

    def coeffs(mode, Q, label):
        if mode == "ones":
            return None
        return _random_unimodular(primes_in(Q, 2 * Q), common["seed"], label)

    def row_for(Q: int) -> kloosterman.ScanRow:
        primes = primes_in(Q, 2 * Q)
        if len(primes) < max(2, cfg["min_primes"]):
            raise ValueError(f"insufficient primes in [{Q}, {2 * Q})")
        spec = kloosterman.PhaseSpec(
            p=cfg["p"], p_prime=cfg["pp"], a=cfg["a"], h=cfg["h"], Q=Q,
            alpha=coeffs(cfg["alpha"], Q, "alpha"),
            beta=coeffs(cfg["beta"], Q, "beta"),
        )
        s = kloosterman.bilinear_sum(spec, primes)
        n = len(primes)
        return kloosterman.ScanRow(
            Q=Q, n_primes=n, abs_sum=abs(s), trivial_bound=float(n * n),
            ratio=abs(s) / (n * n),
        )

    header = ["Q", "n_primes", "abs_sum", "trivial_bound", "ratio"]
    if len(grid) >= 4:
        if random_coeffs:
            rows_d = [row_for(Q) for Q in sorted(grid)]
            slope, intercept = np.polyfit(
                np.log([r.Q for r in rows_d]), np.log([r.abs_sum for r in rows_d]), 1
            )
            scan = kloosterman.KloostermanScan(
                rows=rows_d, slope=float(slope), intercept=float(intercept)
            )
        else:
            scan = kloosterman.cancellation_scan(
                grid, cfg["p"], cfg["pp"], cfg["a"], cfg["h"],
                min_primes=cfg["min_primes"],
            )
        rows = [[r.Q, r.n_primes, r.abs_sum, r.trivial_bound, r.ratio] for r in scan.rows]
        summary = {
            "slope": scan.slope,
            "intercept": scan.intercept,
            "trivial_slope": scan.trivial_slope,
            "reference_slope": scan.reference_slope,
        }
        line = f"kloosterman: {len(rows)} grid points, fitted slope {scan.slope:.3f} (trivial 2)"
        return header, rows, summary, lambda p: figures.kloosterman_figure(scan, p), line

    rows_d = [row_for(Q) for Q in grid]
    rows = [[r.Q, r.n_primes, r.abs_sum, r.trivial_bound, r.ratio] for r in rows_d]
    summary = {"n_points": len(rows)}
    line = f"kloosterman: |Sigma|={rows[0][2]:.4f} at Q={rows[0][0]}"
    return header, rows, summary, None, line


def run_adversarial(cfg, common):
    adv = kloosterman.adversarial_assignment(
        cfg["q"], cfg["p"], cfg["pp"], cfg["x"], split=cfg["split"]
    )
    honest = kloosterman.fixed_assignment_sum(
        cfg["q"], cfg["p"], cfg["pp"], cfg["x"], a=cfg["honest_a"]
    )
    header = ["variant", "Q", "p", "pp", "x", "sum", "ratio"]
    rows = [
        [adv.variant, adv.Q, adv.p, adv.p_prime, adv.X, adv.sum_value, adv.ratio],
        [honest.variant, honest.Q, honest.p, honest.p_prime, honest.X,
         honest.sum_value, honest.ratio],
    ]
    summary = {
        "adversarial_ratio": adv.ratio,
        "honest_ratio": honest.ratio,
        "honest_over_adversarial": abs(honest.ratio) / adv.ratio if adv.ratio else None,
    }
    line = (
        f"adversarial: ratio={adv.ratio:.5f} honest={honest.ratio:.5f} "
        f"(Q={cfg['q']}, X={cfg['x']})"
    )
    return header, rows, summary, lambda p: figures.adversarial_figure(adv, honest, p), line


def run_poisson(cfg, common):
    if cfg["mode"] == "fourier":
        W = poisson_mod.smooth_cutoff(cfg["j_lo"], cfg["j_hi"], cfg["sharpness"])
        A = cfg["decay_a"]
        wa = poisson_mod.w_derivative_l1_bound(W, A)
        grid = W.sharpness * np.geomspace(1.0, cfg["xi_max_mult"], cfg["xi_count"])
        rows_d = []
        for xi in grid:
            v = poisson_mod.fourier_W(W, float(xi))
            rows_d.append({
                "xi": float(xi), "re": v.real, "im": v.imag, "abs": abs(v),
                "bound": wa / xi**A,
            })
        header = ["xi", "re", "im", "abs", "bound"]
        rows = [[r["xi"], r["re"], r["im"], r["abs"], r["bound"]] for r in rows_d]
        sup = max(r["abs"] * r["xi"] ** A * W.sharpness ** (1 - A) for r in rows_d)
        summary = {"A": A, "decay_sup": sup, "derivative_l1_bound": wa}
        line = f"poisson fourier grid: {len(rows)} points, decay sup {sup:.4f} at A={A}"
        fig = lambda p: figures.fourier_grid_figure(rows_d, p, A=A)
        return header, rows, summary, fig, line

    rows_d = []
    for L, d, b, j_lo, j_hi, S, H in cfg["cases"]:
        d, b, H = int(d), int(b), int(H)
        W = poisson_mod.smooth_cutoff(j_lo, j_hi, S)
        if H <= 0:
            H = poisson_mod.adequate_H(W, L, d)
        chk = poisson_mod.poisson_check(W, L, d, b, H)
        rows_d.append({
            "L": L, "d": d, "b": b, "j_lo": j_lo, "j_hi": j_hi, "sharpness": S,
            "H": chk.H, "A": chk.A_used, "lhs": chk.lhs, "re_rhs": chk.rhs.real,
            "im_rhs": chk.rhs.imag, "diff": chk.diff, "tail_bound": chk.tail_bound,
        })
    header = ["L", "d", "b", "j_lo", "j_hi", "sharpness", "H", "A", "lhs",
              "re_rhs", "im_rhs", "diff", "tail_bound"]
    rows = [[r[k] for k in header] for r in rows_d]
    worst = max(r["diff"] for r in rows_d)
    summary = {"n_cases": len(rows_d), "max_diff": worst}
    line = f"poisson-check: {len(rows_d)} cases, max |lhs-rhs| = {worst:.3e}"
    return header, rows, summary, lambda p: figures.poisson_figure(rows_d, p), line


RUNNERS = {
    "discrepancy": run_discrepancy,
    "counterexample": run_counterexample,
    "ramare-moments": run_ramare_moments,
    "decompose": run_decompose,
    "sieve-count": run_sieve_count,
    "kloosterman": run_kloosterman,
    "adversarial": run_adversarial,
    "poisson-check": run_poisson,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="progdist",
        description="Experiments on bounded multiplicative functions in "
                    "arithmetic progressions to large prime moduli.",
    )
    parser.add_argument("--version", action="version", version=f"progdist {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, schema in SCHEMAS.items():
        sp = sub.add_parser(name, help=f"{name} experiment")
        sp.add_argument("--config", type=str, default=None, help="JSON config file")
        sp.add_argument("--out", type=str, default=None, help="CSV output path")
        sp.add_argument("--threads", type=int, default=None,
                        help=f"thread budget (fallback: ${THREADS_ENV})")
        sp.add_argument("--strict", action="store_true", default=False,
                        help="treat regime violations as errors")
        sp.add_argument("--seed", type=int, default=None, help="seed for randomized inputs")
        sp.add_argument("--no-figures", action="store_true", default=False,
                        help="skip the PNG companion")
        for f in schema:
            flag = "--" + f.name.replace("_", "-")
            if f.ftype in ("int", "float"):
                sp.add_argument(flag, type=int if f.ftype == "int" else float,
                                default=None, help=f.help)
            else:
                sp.add_argument(flag, type=str, default=None,
                                help=f.help + (f" {f.choices}" if f.choices else ""))
    return parser


def _load_config_file(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"config file {path}: invalid JSON ({exc})")
    if not isinstance(data, dict):
        raise CliError(f"config file {path}: top level must be an object")
    return data


def _resolve_threads(flag_value: Optional[int]) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"{THREADS_ENV}={env!r}: expected an integer")
    return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subcommand
    try:
        file_cfg = _load_config_file(args.config)
        flag_cfg = {
            f.name: getattr(args, f.name.replace("-", "_")) for f in SCHEMAS[sub]
        }
        cfg = resolve_config(sub, file_cfg, flag_cfg)
        common = {
            "threads": _resolve_threads(args.threads),
            "strict": bool(args.strict),
            "seed": args.seed if args.seed is not None else 0,
            "figures": not args.no_figures,
        }
        header, rows, summary, figure_cb, line = RUNNERS[sub](cfg, common)
        out_path = Path(args.out) if args.out else Path(f"progdist-{sub}.csv")
        resolved = {"subcommand": sub, **common, "out": str(out_path), **cfg}
        written = write_outputs(
            out_path, header, rows, summary, resolved, figure_cb, common["figures"]
        )
        print(f"{line} -> {', '.join(written)}")
        return 0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, OverflowError, AssertionError,
            poisson_mod.QuadratureError, poisson_mod.TailBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
