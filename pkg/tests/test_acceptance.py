"""Acceptance gate: one pass/fail line per criterion.

Run under pytest (lines appear in the ``-v`` log) or directly with
``python3 tests/test_acceptance.py``.
"""

import dataclasses
import time

import numpy as np
import pytest

from hybridfrac import oracle
from hybridfrac.expr import evaluate, parse, to_string
from hybridfrac.hf_basis import Grid, multiply, power, sample
from hybridfrac.opmat import (
    build,
    frac_integrate,
    ramp_increments,
    ramp_second_differences,
    step_increments,
    step_second_differences,
)
from hybridfrac.solver import solve

PROPERTY_ALPHAS = (0.3, 0.5, 1.0, 1.7, 2.5, 3.91)


def _max_err(case, m):
    t0 = time.perf_counter()
    sol = solve(case.problem, m)
    wall = time.perf_counter() - t0
    t = sol.grid.nodes()
    return float(np.max(np.abs(sol.y.node_values() - evaluate(case.exact, t)))), wall


def _table_check(*names):
    ok = True
    parts = []
    for name in names:
        case = oracle.get_cases(name)[0]
        err, wall = _max_err(case, case.m)
        good = err <= case.threshold
        ok &= good
        parts.append(
            f"{name} m={case.m} err={err:.3e} (<= {case.threshold:.0e}, published {case.paper_error:.3e}, {wall:.2f} s)"
        )
    return ok, "; ".join(parts)


def crit_1():
    g = Grid(1.0, 8)
    t = g.nodes()
    worst, slowest = 0.0, 0.0
    for alpha in np.arange(0.5, 5.01, 0.5):
        t0 = time.perf_counter()
        out = frac_integrate(sample(lambda x: x, g), float(alpha))
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, float(np.max(np.abs(out.node_values() - oracle.frac_int_monomial(1, alpha, t)))))
    return worst <= 1e-14 and slowest < 0.1, f"max inf-norm {worst:.3e} (<= 1e-14), slowest {slowest * 1e3:.2f} ms (< 100 ms)"


def crit_2():
    return _table_check("5.1-1")


def crit_3():
    return _table_check("5.1-2")


def crit_4():
    ok, detail = _table_check("5.2-1", "5.2-2")
    walls = [_max_err(c, c.m)[1] for c in oracle.get_cases("5.2")]
    return ok and max(walls) < 60.0, detail + " (runtime bound 60 s)"


def crit_5():
    return _table_check("5.3-1", "5.3-2")


def crit_6():
    return _table_check("5.4-1", "5.4-2")


def crit_7():
    return _table_check("5.4-3", "5.4-4")


def crit_8():
    return _table_check("5.5-1", "5.5-2")


def crit_9():
    return _table_check("5.6-1", "5.6-2")


def crit_10a():
    worst = 0.0
    for alpha in PROPERTY_ALPHAS:
        for m in (1, 8, 64):
            g = Grid(1.0, m)
            ops = build(alpha, g)
            for ps, pt, table in (
                (ops.pss, ops.pst, oracle.step_image_nodes(alpha, g.h, m)),
                (ops.pts, ops.ptt, oracle.ramp_image_nodes(alpha, g.h, m)),
            ):
                dense_s, dense_t = ps.dense(), pt.dense()
                for i in range(m):
                    got = np.append(dense_s[i], dense_s[i, -1] + dense_t[i, -1])
                    ref = np.array([table[j - i] if j > i else 0.0 for j in range(m + 1)])
                    nz = ref != 0
                    rel = np.abs(got - ref)
                    rel[nz] /= np.abs(ref[nz])
                    worst = max(worst, float(rel.max()))
    return worst <= 1e-12, f"max relative discrepancy {worst:.3e} (<= 1e-12) over 6 orders x m in (1, 8, 64)"


def crit_10b():
    ok = True
    for m in (1, 2, 8, 64):
        g = Grid(1.0, m)
        h = g.h
        ops = build(1.0, g)
        ones = np.r_[0.0, np.ones(m - 1)]
        e0 = np.r_[1.0, np.zeros(m - 1)]
        ok &= np.array_equal(ops.pss.first_row, h * ones) and np.array_equal(ops.pst.first_row, h * e0)
        ok &= np.array_equal(ops.pts.first_row, h / 2 * ones) and np.array_equal(ops.ptt.first_row, h / 2 * e0)
    return bool(ok), "first-order matrices reproduced bit for bit for m in (1, 2, 8, 64)"


def crit_10c():
    worst = 0.0
    n = 500
    for alpha in PROPERTY_ALPHAS:
        s, p = step_increments(alpha, n + 1), ramp_increments(alpha, n + 1)
        for dd, inc in ((step_second_differences(alpha, n), s), (ramp_second_differences(alpha, n), p)):
            scale = np.maximum(np.abs(inc[1:]), 1.0)
            worst = max(worst, float(np.max(np.abs(dd - np.diff(inc)) / scale)))
    return worst <= 1e-13, f"max scaled telescoping defect {worst:.3e} (<= 1e-13), k <= {n}"


def crit_10d():
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for m in (1, 2, 8, 64):
        g = Grid(1.0, m)
        t = g.nodes()
        for _ in range(25):
            a, b = rng.normal(size=rng.integers(1, 6)), rng.normal(size=rng.integers(1, 6))
            fa, fb = np.polyval(a, t), np.polyval(b, t)
            pa, pb = sample(lambda x: np.polyval(a, x), g), sample(lambda x: np.polyval(b, x), g)
            scale = max(1.0, float(np.max(np.abs(fa * fb))))
            worst = max(worst, float(np.max(np.abs(multiply(pa, pb).node_values() - fa * fb))) / scale)
            for n in (2, 3):
                scale = max(1.0, float(np.max(np.abs(fa**n))))
                worst = max(worst, float(np.max(np.abs(power(pa, n).node_values() - fa**n))) / scale)
            pos = sample(lambda x: 1.0 + np.polyval(a, x) ** 2, g)
            ref = (1.0 + fa**2) ** 0.7
            worst = max(worst, float(np.max(np.abs(power(pos, 0.7).node_values() - ref) / ref)))
    return worst <= 1e-14, f"max relative node defect {worst:.3e} over 100 random polynomial pairs"


def crit_10e():
    tol = 1e-10
    worst = 0.0
    for p in range(4):
        for alpha in (0.3, 0.5, 1.0, 1.7, 2.5):
            for t in (0.25, 1.0):
                q = oracle.frac_int_quadrature(parse(f"t^{p}"), alpha, t, tol=tol)
                worst = max(worst, abs(q - oracle.frac_int_monomial(p, alpha, t)))
    return worst <= 2 * tol, f"max |quadrature - closed form| {worst:.3e} (<= 2e-10)"


def crit_10f():
    bad = []
    for case in oracle.builtin_cases():
        errs = [_max_err(case, m)[0] for m in (10, 20, 40, 80)]
        if not all(b < a for a, b in zip(errs, errs[1:])):
            bad.append(f"{case.name} [{', '.join(f'{e:.1e}' for e in errs)}]")
    n = len(oracle.builtin_cases())
    detail = f"{n - len(bad)}/{n} cases strictly decreasing over m = 10, 20, 40, 80"
    if bad:
        detail += "; not strictly decreasing: " + "; ".join(bad)
    return not bad, detail


def crit_10g():
    m = 24
    checked = 0
    for name in ("5.1-2", "5.2-1", "5.4-3", "5.5-1", "5.6-1"):
        case = oracle.get_cases(name)[0]
        h = case.problem.t_end / m
        base = solve(case.problem, m)
        for k in (1, 6, 13, 23):
            a = repr((k - 0.5) * h)
            bump = f"(t - {a}) + sqrt((t - {a})^2)"
            pb = dataclasses.replace(case.problem, forcing=parse(f"{to_string(case.problem.forcing)} + 2*({bump})"))
            pert = solve(pb, m)
            same = np.array_equal(base.u.cs[:k], pert.u.cs[:k]) and np.array_equal(base.u.ct[: k - 1], pert.u.ct[: k - 1])
            if not same:
                return False, f"{name}: coefficients before node {k} changed"
            checked += 1
    return True, f"{checked} perturbations of the forcing on [kh - h/2, T] left earlier coefficients bit-identical"


CRITERIA = [
    ("1", "fractional integral of t on h = 1/8, orders 0.5..5", crit_1),
    ("2", "constant-coefficient two-term problem, order 0.5 lower term", crit_2),
    ("3", "constant-coefficient two-term problem, order 0.75 lower term", crit_3),
    ("4", "four-term problems of order 3.91 and sqrt(11)", crit_4),
    ("5", "five-term order-2 problems", crit_5),
    ("6", "cubic nonlinearity, order 2, m = 10", crit_6),
    ("7", "cubic nonlinearity, orders 2.55 and sqrt(7), m = 500", crit_7),
    ("8", "squared derivative plus cubic nonlinearity, m = 300", crit_8),
    ("9", "variable coefficients, m = 500", crit_9),
    ("10a", "matrix entries vs closed forms", crit_10a),
    ("10b", "first-order reduction", crit_10b),
    ("10c", "telescoping identities", crit_10c),
    ("10d", "product and power node exactness", crit_10d),
    ("10e", "quadrature vs monomial oracle", crit_10e),
    ("10f", "refinement monotonicity of solver error", crit_10f),
    ("10g", "triangular causality", crit_10g),
]


def _line(cid, label, ok, detail):
    return f"criterion {cid:>3} {'PASS' if ok else 'FAIL'}  {label}: {detail}"


@pytest.mark.parametrize("cid,label,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, label, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(cid, label, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import sys

    failed = 0
    for cid, label, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(cid, label, ok, detail))
    sys.exit(1 if failed else 0)
