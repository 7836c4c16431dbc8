"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 output could not be written.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import experiments as ex
from . import statevector as sv
from .analytic import PartitionSpec
from .core import analytic_params, make_params, optimal_iterations, success_probability
from .errors import GroverError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
ANALYTIC_THRESHOLD = 2**sv.CAP_SINGLE

SCHEMAS = {
    "simulate": ("k", "P_numeric", "P_analytic", "C_numeric"),
    "validate": ("k", "partition", "C_analytic", "C_numeric", "abs_err"),
    "diagnostics": (
        "suite", "n", "marked", "l", "k", "C_numeric",
        "C_corrected", "C_literal", "C_exact", "err_corrected", "err_literal", "err_exact",
    ),
    "figure1": ("k", "A2", "C_analytic"),
    "figure1_numeric": ("k", "A2", "C_analytic", "C_numeric", "abs_err"),
    "figure2": ("k", "oracle_gain", "reflection_drop"),
    "optimality": ("n", "T", "lhs", "rhs", "satisfied", "rhs_rate"),
    "parallel": ("register", "trace_distance"),
    "quarter": ("quantity", "value"),
    "speedup": ("k", "P_integrated", "P_exact", "abs_err"),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)
    out: str | None = None


# -- parsing ----------------------------------------------------------------

def parse_marked(text: str) -> list[int]:
    """``"3,12"`` or ``"count:K"`` (the first K indices)."""
    text = text.strip()
    if text.startswith("count:"):
        count = int(text.split(":", 1)[1])
        if count < 1:
            raise ValueError("count must be positive")
        return list(range(count))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grover-ent", description="Entanglement dynamics of Grover search."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def out_flag(p):
        p.add_argument("--out", help="CSV destination (default: stdout)")

    p = sub.add_parser("simulate", help="statevector run with analytic comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--marked", required=True)
    p.add_argument("--iters", default="auto", help="'auto' for the optimal count, or an integer")
    p.add_argument("--l", type=int, help="left block size for the concurrence column (default n//2)")
    out_flag(p)

    p = sub.add_parser("validate", help="closed form vs partial trace on every split")
    p.add_argument("--n", type=int)
    p.add_argument("--marked")
    p.add_argument("--partitions", default="all", help="'all' or comma-separated l values")
    p.add_argument("--kmax", type=int)
    p.add_argument("--formula", choices=("closed", "exact"), default="closed")
    p.add_argument("--diagnostics", action="store_true",
                   help="byproduct-term arbitration report instead of a sweep")
    out_flag(p)

    p = sub.add_parser("figure", help="concurrence sweeps")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--N", type=int, dest="N_override")
    size.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--marked")
    p.add_argument("--kmax", type=int)
    p.add_argument("--l", type=int, help="partition; omitted means eta = 1")
    p.add_argument("--numeric", action="store_true", help="add statevector columns (figure 1)")
    out_flag(p)

    p = sub.add_parser("optimality", help="query lower-bound experiment")
    p.add_argument("--nmin", type=int, default=3)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--tmax", type=int)
    p.add_argument("--epsilon", type=float, default=0.5)
    out_flag(p)

    p = sub.add_parser("parallel", help="search on GHZ-entangled registers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--marked", required=True)
    p.add_argument("--variant", choices=("global", "local"), default="global")
    out_flag(p)

    p = sub.add_parser("quarter", help="the r = N/4 single-query case")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--marked")
    out_flag(p)

    p = sub.add_parser("speedup", help="integrate the speedup condition")
    p.add_argument("--A0", type=float, required=True)
    p.add_argument("--kmax", type=int)
    p.add_argument("--h", type=float, default=1e-3)
    out_flag(p)
    return parser


def _validate(cfg: RunConfig) -> None:
    o = cfg.options
    for key in ("marked",):
        if o.get(key) is not None:
            try:
                o[key] = parse_marked(o[key])
            except ValueError:
                raise UsageError(f"--{key}: expected comma-separated indices or count:K")
    sc = cfg.subcommand
    if sc == "simulate":
        if o["iters"] != "auto":
            try:
                o["iters"] = int(o["iters"])
            except ValueError:
                raise UsageError("--iters: expected 'auto' or a non-negative integer")
            if o["iters"] < 0:
                raise UsageError("--iters: expected 'auto' or a non-negative integer")
    elif sc == "validate":
        if not o["diagnostics"]:
            if o["n"] is None or o["marked"] is None:
                raise UsageError("--n and --marked are required unless --diagnostics is given")
            if o["partitions"] != "all":
                try:
                    o["partitions"] = [int(tok) for tok in o["partitions"].split(",")]
                except ValueError:
                    raise UsageError("--partitions: expected 'all' or comma-separated integers")
    elif sc == "figure":
        N = o["N_override"] if o["N_override"] is not None else 2 ** o["n"]
        o["N"] = N
        if o["marked"] is not None and o["r"] is not None and o["r"] != len(o["marked"]):
            raise UsageError("--r disagrees with the size of --marked")
        if o["r"] is None:
            o["r"] = len(o["marked"]) if o["marked"] is not None else 1
        if N > ANALYTIC_THRESHOLD:
            for flag in ("numeric", "marked"):
                if o[flag]:
                    raise UsageError(f"--{flag} is not available in analytic-only mode (N > 2^{sv.CAP_SINGLE})")
        if o["numeric"] and o["which"] == 2:
            raise UsageError("--numeric applies to --which 1 only")
        if o["numeric"] and o["l"] is None:
            raise UsageError("--numeric needs --l")
    elif sc == "speedup":
        if not 0.0 < o["A0"] < 1.0:
            raise UsageError("--A0 must lie in (0, 1)")


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """Parse and validate; usage problems exit with status 2."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    opts = vars(ns).copy()
    cfg = RunConfig(opts.pop("subcommand"), opts, opts.pop("out", None))
    try:
        _validate(cfg)
    except UsageError as exc:
        parser.error(str(exc))
    return cfg


# -- output -----------------------------------------------------------------

def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    if value is None:
        return ""
    return str(value)


def emit_csv(rows: Iterable[Sequence[Any]], schema: Sequence[str], path: str | None = None) -> None:
    """Header then rows; '.' decimals, ',' delimiter, '\\n' line ends, UTF-8."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema)
    for row in rows:
        if len(row) != len(schema):
            raise ValueError(f"row of width {len(row)} does not match schema {schema}")
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- subcommands ------------------------------------------------------------

def _run_simulate(o, out, say):
    params = make_params(o["n"], o["marked"])
    k = optimal_iterations(params) if o["iters"] == "auto" else o["iters"]
    l = o["l"] if o["l"] is not None else max(1, o["n"] // 2)
    PartitionSpec(l, o["n"])
    rows = []
    for step, state in enumerate(sv.grover_trajectory(o["n"], params.marked, k)):
        rows.append((
            step,
            state.probability(params.marked),
            success_probability(step, params),
            sv.concurrence_numeric(state, range(l)),
        ))
    emit_csv(rows, SCHEMAS["simulate"], out)
    say(f"iterations={k} success_probability={rows[-1][1]:.12g} split={l}|{o['n'] - l}")
    return EXIT_OK


def _run_validate(o, out, say):
    if o["diagnostics"]:
        rows, ok = [], True
        literal_gap = 0.0
        for name, suite in (("core", ex.BYPRODUCT_SUITE), ("extended", ex.BYPRODUCT_EXTENDED)):
            for r in ex.byproduct_diagnostics(suite):
                if name == "core":
                    ok &= r.err_corrected < ex.VALIDATION_TOL
                    literal_gap = max(literal_gap, r.err_literal)
                rows.append((
                    name, r.n, " ".join(map(str, r.marked)), r.l, r.k, r.C_numeric,
                    r.C_corrected, r.C_literal, r.C_exact,
                    r.err_corrected, r.err_literal, r.err_exact,
                ))
        ok &= literal_gap > 1e-3
        emit_csv(rows, SCHEMAS["diagnostics"], out)
        say(f"core suite: corrected term {'matches' if ok else 'FAILS'}; "
            f"largest literal-variant error {literal_gap:.3g}")
        return EXIT_OK if ok else EXIT_FAIL
    report = ex.cross_validate(o["n"], o["marked"], o["kmax"], o["partitions"], o["formula"])
    emit_csv(
        [(r.k, r.partition, r.C_analytic, r.C_numeric, r.abs_err) for r in report.rows],
        SCHEMAS["validate"], out,
    )
    say(f"max_abs_err={report.max_abs_err:.3g} failing_cells={len(report.failing)} "
        f"{'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _run_figure(o, out, say):
    N, r = o["N"], o["r"]
    if o["which"] == 1:
        rows = ex.figure1_sweep(N, r, o["kmax"], o["l"], o["marked"], o["numeric"])
        if o["numeric"]:
            data = [(x.k, x.A2, x.C_analytic, x.C_numeric, x.abs_err) for x in rows]
            emit_csv(data, SCHEMAS["figure1_numeric"], out)
        else:
            emit_csv([(x.k, x.A2, x.C_analytic) for x in rows], SCHEMAS["figure1"], out)
        summary = ex.figure1_summary(rows, analytic_params(N, r))
        say(
            f"peak k={summary['peak_k']} C={summary['peak_C']:.6f} "
            f"(pi/(8 theta)={summary['pi_over_8theta']:.3f}); "
            f"C(0)={summary['C_first']:.3g}; C({summary['k_last']})={summary['C_last']:.3g}"
        )
        if o["numeric"]:
            worst = max(x.abs_err for x in rows)
            say(f"max |analytic - numeric| = {worst:.3g}")
            return EXIT_OK if worst < ex.VALIDATION_TOL else EXIT_FAIL
        return EXIT_OK
    rows = ex.figure2_sweep(N, r, o["kmax"], o["l"])
    emit_csv([(x.k, x.oracle_gain, x.reflection_drop) for x in rows], SCHEMAS["figure2"], out)
    say(f"crossover k={ex.figure2_crossover(rows)}; gain(0)={rows[0].oracle_gain:.6g}")
    return EXIT_OK


def _run_optimality(o, out, say):
    res = ex.optimality_experiment(range(o["nmin"], o["nmax"] + 1), o["tmax"], o["epsilon"])
    emit_csv(
        [(b.n, b.T, b.lhs, b.rhs, b.satisfied, b.rhs_rate) for b in res.reports],
        SCHEMAS["optimality"], out,
    )
    say("T_star: " + " ".join(f"n={n}:{t}" for n, t in res.t_star.items()))
    say(f"T_star/sqrt(N) ~ {res.fit_constant:.4f} within {100 * res.fit_max_rel_dev:.1f}%")
    say(f"sqrt(2) T sqrt(N) violations: {len(res.violations)}; "
        f"2 sqrt(2) T sqrt(N) violations: {len(res.rate_violations)}")
    return EXIT_OK if not res.violations else EXIT_FAIL


def _run_parallel(o, out, say):
    res = ex.parallel_demo(o["n"], o["l"], o["marked"], o["variant"])
    emit_csv(list(enumerate(res.final_trace_distance)), SCHEMAS["parallel"], out)
    say(f"variant={res.variant} iterations={res.k_used} "
        f"max trace distance={max(res.final_trace_distance):.3g}")
    if res.variant == "global":
        return EXIT_OK if max(res.final_trace_distance) < 1e-9 else EXIT_FAIL
    return EXIT_OK


def _run_quarter(o, out, say):
    rec = ex.quarter_case_demo(o["n"], o["marked"])
    rows = [
        ("marked", " ".join(map(str, rec.marked))),
        ("success_after_one", rec.success_after_one),
        ("post_oracle_concurrence", rec.post_oracle_concurrence),
        ("search_concurrence_after", rec.search_concurrence_after),
        ("final_concurrence", rec.final_concurrence),
        ("target_concurrence", rec.target_concurrence),
        ("quantum_queries", rec.quantum_queries),
        ("classical_queries", rec.classical_queries),
    ]
    emit_csv(rows, SCHEMAS["quarter"], out)
    ok = abs(rec.success_after_one - 1.0) < 1e-12
    say(f"one query finds a marked state with probability {rec.success_after_one:.15g}")
    return EXIT_OK if ok else EXIT_FAIL


def _run_speedup(o, out, say):
    dev, P = ex.speedup_condition_check(o["A0"], o["kmax"], o["h"])
    phi = math.asin(o["A0"])
    rows = []
    for k, p in enumerate(P):
        exact = math.sin((2 * k + 1) * phi) ** 2
        rows.append((k, float(p), exact, abs(float(p) - exact)))
    emit_csv(rows, SCHEMAS["speedup"], out)
    say(f"max deviation {dev:.3g} over k=0..{len(P) - 1}")
    return EXIT_OK if dev < 1e-6 else EXIT_FAIL


_DISPATCH = {
    "simulate": _run_simulate,
    "validate": _run_validate,
    "figure": _run_figure,
    "optimality": _run_optimality,
    "parallel": _run_parallel,
    "quarter": _run_quarter,
    "speedup": _run_speedup,
}


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(argv)
    stream = sys.stderr if cfg.out in (None, "-") else sys.stdout

    def say(msg: str) -> None:
        print(msg, file=stream)

    try:
        return _DISPATCH[cfg.subcommand](cfg.options, cfg.out, say)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GroverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
