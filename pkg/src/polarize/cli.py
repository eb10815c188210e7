"""Command-line interface.

Exit codes: 0 success / property holds, 1 a checked property failed,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import proof_check as pc
from .errors import InputError
from .sign_search import lambda_map, longest_sum
from .slice_min import CubeSliceProblem, mu_closed_form, mu_values, product_value
from .sphere_opt import OptimizerConfig, maximize_product, witness_from_longest_sum
from .trials import run_random_trials
from .vectors import load

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- output -------------------------------------------------------------------


def _json_value(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _json_value(obj)


def _csv_cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_csv_cell(t) for t in v)
    if isinstance(v, dict):
        return " ".join(f"{k}={_csv_cell(t)}" for k, t in v.items())
    return str(v)


def _text_cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_text_cell(t) for t in v) + "]"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_cell(t)}" for k, t in v.items())
    return str(v)


def render(data, fmt: str) -> str:
    """Render one record (dict) or a table (list of dicts with equal keys)."""
    rows = data if isinstance(data, list) else [data]
    if fmt == "json":
        return to_json(data)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows:
            w.writerow(rows[0].keys())
            for r in rows:
                w.writerow(_csv_cell(v) for v in r.values())
        return buf.getvalue().rstrip("\n")
    if isinstance(data, dict):
        width = max((len(k) for k in data), default=0)
        return "\n".join(f"{k:<{width}}  {_text_cell(v)}" for k, v in data.items())
    if not rows:
        return ""
    keys = list(rows[0].keys())
    cells = [[_text_cell(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines)


# --- input --------------------------------------------------------------------


def read_vectors(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if p.suffix.lower() == ".csv":
        try:
            data = [[float(c) for c in row] for row in csv.reader(io.StringIO(text)) if any(c.strip() for c in row)]
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
    else:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: malformed JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "vectors" not in obj:
            raise InputError(f'{path}: expected an object with a "vectors" field')
        data = obj["vectors"]
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise InputError(f'{path}: "vectors" must be an array of arrays')
        if any(isinstance(c, bool) or not isinstance(c, (int, float)) for r in data for c in r):
            raise InputError(f'{path}: "vectors" entries must be numbers')
    return load(data)


# --- commands -------------------------------------------------------------------


def cmd_mu(args):
    cert = mu_closed_form(CubeSliceProblem(args.n, args.s))
    out = {
        "n": cert.problem.n,
        "s": cert.problem.s,
        "k0": cert.k0,
        "residual_sum": cert.residual_sum,
        "value": cert.value,
        "minimizer": list(cert.minimizer.a),
    }
    return out, EXIT_OK


def cmd_breakpoints(args):
    table = pc.breakpoints(args.n)
    hp = pc.half_power(args.n)
    rows = []
    for j, s in enumerate(table.s):
        p = s**j
        rows.append({"j": j, "s_j": s, "s_j_pow_j": p, "sqrt_n_pow_n": hp, "mu_s_j": s ** (-j), "bound_holds": p <= hp * (1 + 1e-12)})
    return rows, EXIT_OK


def cmd_table(args):
    if not 3 <= args.n_min <= args.n_max <= 16:
        raise UsageError("need 3 <= n_min <= n_max <= 16")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        r = pc.table_row(n)
        rows.append({"n": n, "column2": r.column2, "s_nm1_pow": r.s_nm1_pow, "sqrt_n_pow_n": r.half_power, "bound_holds": r.bound_holds})
    return rows, EXIT_OK


def cmd_scan(args):
    n_min = args.n if args.n is not None else args.n_min
    n_max = args.n if args.n is not None else args.n_max
    if not 2 <= n_min <= n_max <= 14:
        raise UsageError("scan needs 2 <= n <= 14")
    rows, code = [], EXIT_OK
    for n in range(n_min, n_max + 1):
        g = pc.global_minimum_scan(n, args.grid)
        near = abs(g.argmin - math.sqrt(n)) <= g.grid_step
        rows.append({"n": n, "min_value": g.min_value, "bound": n ** (-n / 2), "argmin": g.argmin, "argmin_at_sqrt_n": near, "bound_holds": g.bound_holds})
        if not (g.bound_holds and near):
            code = EXIT_FAIL
    return rows, code


def cmd_witness(args):
    vs = read_vectors(args.input)
    rep = witness_from_longest_sum(vs, method=args.method, seed=args.seed)
    return rep.as_dict(), EXIT_OK if rep.passes else EXIT_FAIL


def cmd_maximize(args):
    vs = read_vectors(args.input)
    cfg = OptimizerConfig.default(vs.n, seed=args.seed, starts=args.starts, max_iters=args.max_iters, grad_tol=args.grad_tol)
    rep = maximize_product(vs, cfg)
    return rep.as_dict(), EXIT_OK if rep.passes else EXIT_FAIL


def cmd_lambda(args):
    vs = read_vectors(args.input)
    res = longest_sum(vs, method=args.method, seed=args.seed)
    point = lambda_map(vs, res)
    cert = mu_closed_form(point.problem)
    f = product_value(point)
    holds = f >= cert.value * (1 - 1e-9)
    out = {"signs": str(res.signs), "s": point.problem.s, "a": list(point.a), "product": f, "mu": cert.value, "product_ge_mu": holds}
    return out, EXIT_OK if holds else EXIT_FAIL


def cmd_random_trials(args):
    if not 2 <= args.n_min <= args.n_max:
        raise UsageError("need 2 <= n_min <= n_max")
    if args.n_max > 24:
        raise UsageError("exhaustive sign search is limited to n <= 24")
    rows, code = [], EXIT_OK
    for n in range(args.n_min, args.n_max + 1):
        t = run_random_trials(n, args.trials, args.seed)
        rows.append({"n": n, "trials": t.trials, "passed": t.passed, "min_product_over_bound": t.min_ratio, "worst_index": t.worst_index})
        if not t.ok and n <= 14:
            code = EXIT_FAIL
    return rows, code


def verification_checks(n_max: int, trials: int, seed: int, grid: int):
    """Yield ``(name, passed, detail)`` for every check up to ``n_max``."""
    for n in range(2, n_max + 1):
        try:
            table = pc.breakpoints(n)
            yield f"n={n} breakpoints", True, f"s_n={table.s[n]:.12g} s_0={table.s[0]:.12g}"
        except AssertionError as exc:
            yield f"n={n} breakpoints", False, str(exc)
            continue

        try:
            for j in range(1, n + 1):
                pc.mu_at_breakpoint(n, j)
            yield f"n={n} mu(s_j)=s_j^-j", True, f"j=1..{n}"
        except AssertionError as exc:
            yield f"n={n} mu(s_j)=s_j^-j", False, str(exc)

        hp = pc.half_power(n)
        pows = [s**j for j, s in enumerate(table.s)]
        ok = all(p < hp * (1 - 1e-12) for p in pows[:-1]) and abs(pows[-1] - hp) <= 1e-12 * hp
        yield f"n={n} s_j^j<=sqrt(n^n)", ok, f"max ratio {max(pows[:-1]) / hp:.6f}"

        qc = [pc.quasiconcavity_check(n, j, max(grid // 10, 10_000)) for j in range(1, n + 1)]
        ok = all(q.quasiconcave for q in qc) and all(q.derivative_at_left > 0 for q in qc)
        yield f"n={n} M_j quasi-concave", ok, f"turning points at j={[j for j, q in enumerate(qc, 1) if q.critical_point]}"

        worst = 0.0
        for j in range(1, n + 1):
            lo, hi = table.s[j], table.s[j - 1]
            xs = np.linspace(lo, hi, 102)[1:-1]
            m = np.array([pc.mj_eval(n, j, x) for x in xs])
            worst = max(worst, float(np.max(np.abs(m - mu_values(n, xs)) / mu_values(n, xs))))
        yield f"n={n} M_j = mu on (s_j, s_j-1)", worst <= 1e-11, f"max rel err {worst:.3g}"

        g = pc.global_minimum_scan(n, grid)
        near = abs(g.argmin - math.sqrt(n)) <= g.grid_step
        rel = abs(g.min_value - n ** (-n / 2)) / n ** (-n / 2)
        yield f"n={n} global minimum", g.bound_holds and near and rel <= 1e-10, f"min={g.min_value:.12g} at s={g.argmin:.12g}"

        if n >= 3:
            row = pc.table_row(n)
            ok = row.bound_holds and row.column2 > 1 and table_matches(row)
            yield f"n={n} table row", ok, f"column2={row.column2:.6g} s_(n-1)^(n-1)={row.s_nm1_pow:.12g}"
            pa = pc.phi_analysis(n, 1000)
            ok = pa.phi_left >= 0 and pa.phi_prime_positive and pa.discriminant < 0
            yield f"n={n} phi analysis", ok, f"phi_left={pa.phi_left:.6g} min phi'={pa.phi_prime_min:.6g}"

        if trials > 0:
            t = run_random_trials(n, trials, seed)
            yield f"n={n} random witnesses", t.ok, f"{t.passed}/{t.trials} pass, min product/bound {t.min_ratio:.6g}"


def table_matches(row: pc.TableRow) -> bool:
    """Compare a computed row with the printed reference values."""
    col2, s_pow, hp = pc.PRINTED_TABLE[row.n]

    def close(computed, printed):
        if isinstance(printed, int):
            return round(computed) == printed
        return abs(computed - printed) <= pc.TABLE_RTOL * abs(printed)

    return close(row.column2, col2) and close(row.s_nm1_pow, s_pow) and close(row.half_power, hp)


def cmd_verify(args):
    if not 2 <= args.n_max <= 14:
        raise UsageError("verify covers 2 <= n_max <= 14 (the proven range)")
    if args.trials < 0:
        raise UsageError("trials must be >= 0")
    rows = [{"check": name, "passed": ok, "detail": detail} for name, ok, detail in verification_checks(args.n_max, args.trials, args.seed, args.grid)]
    failed = sum(not r["passed"] for r in rows)
    print(f"{len(rows)} checks, {failed} failed", file=sys.stderr)
    return rows, EXIT_FAIL if failed else EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarize", description="Polarization-constant numerics for real n-space.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.set_defaults(func=func)
        return p

    p = add("mu", cmd_mu, "closed-form slice minimum mu(s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)

    p = add("breakpoints", cmd_breakpoints, "breakpoints s_j and s_j^j")
    p.add_argument("--n", type=int, required=True)

    p = add("table", cmd_table, "reproduce the s_{n-1}^{n-1} vs sqrt(n^n) table")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=16)

    p = add("scan", cmd_scan, "grid scan for the global minimum of mu")
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--grid", type=int, default=100_000)

    for name, func, help in (
        ("witness", cmd_witness, "longest-sum witness for a vector file"),
        ("lambda", cmd_lambda, "map a vector file to its slice point"),
    ):
        p = add(name, func, help)
        p.add_argument("input")
        p.add_argument("--method", choices=("auto", "exhaustive", "local_search"), default="auto")
        p.add_argument("--seed", type=int, default=0)

    p = add("maximize", cmd_maximize, "maximize |prod <x, v_i>| over the sphere")
    p.add_argument("input")
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--grad-tol", type=float, default=1e-10)

    p = add("verify", cmd_verify, "run every numerical check up to n_max")
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid", type=int, default=100_000)

    p = add("random-trials", cmd_random_trials, "longest-sum witness on seeded random systems")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        data, code = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(render(data, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
