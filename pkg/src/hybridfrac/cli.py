"""Command-line interface: ``solve``, ``bench``, ``verify`` and ``integrate``.

Exit codes: 0 success, 1 input error, 2 solver convergence failure,
3 a benchmark or verification threshold was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import expr as _expr
from . import oracle, report
from .errors import ConvergenceError, HybridFracError
from .hf_basis import Grid, sample
from .opmat import build, frac_integrate
from .problemfile import dump_problem, load_problem
from .solver import solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONVERGENCE = 2
EXIT_THRESHOLD = 3

def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def cmd_solve(args) -> int:
    try:
        problem, exact = load_problem(args.problem)
        t0 = time.perf_counter()
        sol = solve(problem, args.m)
        wall = time.perf_counter() - t0
        rep = report.make_report(sol, exact, wall)
    except ConvergenceError as exc:
        _err(exc)
        return EXIT_CONVERGENCE
    except (HybridFracError, OSError, ValueError) as exc:
        _err(exc)
        return EXIT_INPUT
    text = report.to_csv(rep) if args.format == "csv" else report.to_markdown(rep)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    if rep.max_abs_err is not None:
        print(f"max abs error: {rep.max_abs_err:.6e}", file=sys.stderr)
    print(f"residual: {rep.residual:.3e}  wall time: {wall:.4f} s", file=sys.stderr)
    return EXIT_OK


def _max_error(case, m):
    sol = solve(case.problem, m)
    t = sol.grid.nodes()
    return sol, float(np.max(np.abs(sol.y.node_values() - _expr.evaluate(case.exact, t))))


def cmd_bench(args) -> int:
    try:
        cases = oracle.get_cases(args.suite)
    except KeyError as exc:
        _err(exc.args[0])
        return EXIT_INPUT
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    sweeps = {}
    sweep_rows = []
    failed = False
    for case in cases:
        try:
            t0 = time.perf_counter()
            sol, err = _max_error(case, case.m)
            wall = time.perf_counter() - t0
        except HybridFracError as exc:
            _err(f"{case.name}: {exc}")
            failed = True
            continue
        rep = report.make_report(sol, case.exact, wall)
        (out_dir / f"{case.name}.csv").write_text(report.to_csv(rep), encoding="utf-8", newline="\n")
        dump_problem(case.problem, out_dir / f"{case.name}.json", case.exact)
        passed = err <= case.threshold
        failed |= not passed
        rows.append(
            dict(case=case.name, label=case.label, m=case.m, h=case.paper_h, error=err,
                 published=case.paper_error, threshold=case.threshold, passed=passed,
                 wall_time=wall, baselines=case.baselines)
        )
        print(f"{case.name:6s} m={case.m:<4d} max abs error {err:.3e} "
              f"(threshold {case.threshold:.0e}) {'PASS' if passed else 'FAIL'}  {wall:.3f} s")
        if args.sweep:
            pts = [(case.m * f, _max_error(case, case.m * f)[1]) for f in (1, 2, 4)]
            sweeps[case.name] = pts
            trend = report.refinement_trend([e for _, e in pts])
            sweep_rows += [(case.name, m, e, trend) for m, e in pts]
            print(f"       sweep {', '.join(f'm={m}: {e:.3e}' for m, e in pts)} -> {trend}")
    (out_dir / "summary.md").write_text(report.bench_summary(rows, sweeps), encoding="utf-8", newline="\n")
    if args.sweep:
        with open(out_dir / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("case", "m", "max_abs_err", "trend"))
            for name, m, e, trend in sweep_rows:
                w.writerow((name, m, report.fmt(e), trend))
    return EXIT_THRESHOLD if failed else EXIT_OK


def verify_alpha(alpha: float, m: int, t_end: float = 1.0) -> dict:
    """Compare the operational matrices of order ``alpha`` with independent references.

    The closed-form node values of the fractional integrals of the basis
    functions are evaluated in extended precision, so the reported
    discrepancy belongs to the matrices alone. Returns the maximum relative
    closed-form discrepancy, the maximum
    absolute quadrature discrepancy and, for ``alpha == 1``, whether the
    first-order matrices are reproduced bit for bit.
    """
    grid = Grid(t_end, m)
    h = grid.h
    ops = build(alpha, grid)
    refs = (oracle.step_image_nodes(alpha, h, m), oracle.ramp_image_nodes(alpha, h, m))

    def hf_nodes(p_s, p_t, i):
        # node values of the HF image of basis function i: rows i of the pair
        cs = p_s.dense()[i]
        ct = p_t.dense()[i]
        return np.append(cs, cs[-1] + ct[-1])

    worst_closed = 0.0
    for i in range(m):
        for ps, pt, table in ((ops.pss, ops.pst, refs[0]), (ops.pts, ops.ptt, refs[1])):
            got = hf_nodes(ps, pt, i)
            ref = np.array([table[j - i] if j > i else 0.0 for j in range(m + 1)])
            nz = ref != 0
            rel = np.abs(got - ref)
            rel[nz] /= np.abs(ref[nz])
            worst_closed = max(worst_closed, float(rel.max()))

    worst_quad = 0.0
    spots = sorted({(0, m), (0, min(1, m)), (m // 3, m), (m // 2, min(m, m // 2 + 2)), (m - 1, m)})
    for i, j in spots:
        a, b = i * h, (i + 1) * h
        # closed on the right: for small alpha, t - s^q rounds to t itself and
        # the integrand there must be the left limit
        shf = lambda x, a=a, b=b: np.where((x >= a) & (x <= b), 1.0, 0.0)
        tf = lambda x, a=a, b=b: np.where((x >= a) & (x <= b), (x - a) / h, 0.0)
        t = j * h
        for fn, ps, pt in ((shf, ops.pss, ops.pst), (tf, ops.pts, ops.ptt)):
            q = oracle.frac_int_quadrature(fn, alpha, t, tol=1e-12, breakpoints=[a, b])
            worst_quad = max(worst_quad, abs(q - hf_nodes(ps, pt, i)[j]))

    result = {"alpha": alpha, "m": m, "closed_form": worst_closed, "quadrature": worst_quad}
    if alpha == 1:
        ones = np.r_[0.0, np.ones(m - 1)]
        e0 = np.r_[1.0, np.zeros(m - 1)]
        result["first_order_exact"] = (
            np.array_equal(ops.pss.first_row, h * ones)
            and np.array_equal(ops.pst.first_row, h * e0)
            and np.array_equal(ops.pts.first_row, (h / 2) * ones)
            and np.array_equal(ops.ptt.first_row, (h / 2) * e0)
        )
    return result


def cmd_verify(args) -> int:
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
        if not alphas:
            raise ValueError("no orders given")
        results = [verify_alpha(a, args.m) for a in alphas]
    except (ValueError, HybridFracError) as exc:
        _err(exc)
        return EXIT_INPUT
    ok = True
    for r in results:
        good = r["closed_form"] <= 1e-12 and r["quadrature"] <= 1e-9 and r.get("first_order_exact", True)
        ok &= good
        extra = ""
        if "first_order_exact" in r:
            extra = f"  first-order matrices exact: {r['first_order_exact']}"
        print(f"alpha={r['alpha']:g} m={r['m']}: closed-form rel {r['closed_form']:.3e}, "
              f"quadrature abs {r['quadrature']:.3e}{extra}  {'PASS' if good else 'FAIL'}")
    return EXIT_OK if ok else EXIT_THRESHOLD


def cmd_integrate(args) -> int:
    try:
        f = _expr.parse(args.expr)
        exact = _expr.parse(args.exact) if args.exact else None
        grid = Grid(args.t_end, args.m)
        t0 = time.perf_counter()
        res = frac_integrate(sample(lambda t: _expr.evaluate(f, t), grid), args.alpha)
        wall = time.perf_counter() - t0
        t = grid.nodes()
        vals = res.node_values()
        ref = None if exact is None else _expr.evaluate(exact, t)
    except (HybridFracError, ValueError) as exc:
        _err(exc)
        return EXIT_INPUT
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("t", "j_hf") + (("j_exact", "abs_err") if ref is not None else ()))
    for k in range(t.size):
        row = [report.fmt(t[k]), report.fmt(vals[k])]
        if ref is not None:
            row += [report.fmt(ref[k]), report.fmt(abs(vals[k] - ref[k]))]
        w.writerow(row)
    if ref is not None:
        print(f"inf-norm error: {float(np.max(np.abs(vals - ref))):.6e}")
    print(f"wall time: {wall:.4f} s", file=sys.stderr)
    return EXIT_OK


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(s):
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; status 2 is reserved for convergence failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="hybridfrac",
        description="Hybrid-function operational matrices for fractional integrals and multi-order FDEs.",
    )
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem", help="JSON problem file")
    p.add_argument("--m", type=_positive_int, required=True, help="number of subintervals")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run the built-in benchmark cases")
    p.add_argument("--suite", default="all", help="'all', an example id such as 5.4, or a case id such as 5.4-3")
    p.add_argument("--out-dir", default="bench-out")
    p.add_argument("--sweep", action="store_true", help="also solve at 2m and 4m")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check operational matrices against closed forms and quadrature")
    p.add_argument("--m", type=_positive_int, default=64)
    p.add_argument("--alphas", default="0.5,1,2.5", help="comma-separated orders")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="fractional integral of an expression on a grid")
    p.add_argument("expr")
    p.add_argument("--alpha", type=_positive_float, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--t-end", type=_positive_float, default=1.0)
    p.add_argument("--exact", help="closed-form integral to compare against")
    p.set_defaults(func=cmd_integrate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
