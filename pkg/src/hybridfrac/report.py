"""Solve reports as CSV and markdown.

Data files are deterministic: numbers use 17 significant digits and no
timestamps appear in them. Wall time only shows up in summaries.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import expr as _expr
from .solver import Solution

CSV_HEADER = ("t", "y_hf", "y_exact", "abs_err")

# errors at or below this count as exact when labelling refinement sweeps
ROUNDING_FLOOR = 1e-13


def fmt(x) -> str:
    return "" if x is None else format(float(x), ".17g")


@dataclass
class SolveReport:
    t: np.ndarray
    y_hf: np.ndarray
    y_exact: np.ndarray | None
    m: int
    h: float
    residual: float
    wall_time: float
    max_iterations: int

    @property
    def abs_err(self):
        return None if self.y_exact is None else np.abs(self.y_hf - self.y_exact)

    @property
    def max_abs_err(self):
        err = self.abs_err
        return None if err is None else float(err.max())


def make_report(sol: Solution, exact=None, wall_time: float = 0.0) -> SolveReport:
    t = sol.grid.nodes()
    y_exact = None if exact is None else _expr.evaluate(exact, t)
    return SolveReport(
        t=t,
        y_hf=sol.y.node_values(),
        y_exact=y_exact,
        m=sol.grid.m,
        h=sol.grid.h,
        residual=sol.residual,
        wall_time=wall_time,
        max_iterations=sol.max_iterations,
    )


def to_csv(rep: SolveReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    err = rep.abs_err
    for k in range(rep.t.size):
        if rep.y_exact is None:
            w.writerow([fmt(rep.t[k]), fmt(rep.y_hf[k]), "", ""])
        else:
            w.writerow([fmt(rep.t[k]), fmt(rep.y_hf[k]), fmt(rep.y_exact[k]), fmt(err[k])])
    return buf.getvalue()


def to_markdown(rep: SolveReport) -> str:
    lines = [
        "| quantity | value |",
        "|---|---|",
        f"| m | {rep.m} |",
        f"| h | {fmt(rep.h)} |",
    ]
    if rep.max_abs_err is not None:
        lines.append(f"| max abs error | {rep.max_abs_err:.6e} |")
    lines += [
        f"| residual | {rep.residual:.3e} |",
        f"| max iterations per node | {rep.max_iterations} |",
        f"| wall time (s) | {rep.wall_time:.4f} |",
        "",
        "| " + " | ".join(CSV_HEADER) + " |",
        "|---|---|---|---|",
    ]
    err = rep.abs_err
    for k in range(rep.t.size):
        cells = [fmt(rep.t[k]), fmt(rep.y_hf[k])]
        cells += ["", ""] if rep.y_exact is None else [fmt(rep.y_exact[k]), fmt(err[k])]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def refinement_trend(errors) -> str:
    """Label a sequence of errors on successively refined grids."""
    errors = list(errors)
    if all(b < a for a, b in zip(errors, errors[1:])):
        return "decreasing"
    if max(errors) <= ROUNDING_FLOOR:
        return "rounding floor"
    return "not decreasing"


def bench_summary(rows, sweeps=None) -> str:
    """Markdown summary of a benchmark run.

    ``rows`` are dicts with keys ``case``, ``label``, ``m``, ``h``,
    ``error``, ``published``, ``threshold``, ``passed``, ``wall_time``,
    ``baselines``. ``sweeps`` maps case names to ``[(m, error), ...]``.
    """
    out = [
        "# Benchmark summary",
        "",
        "| case | m | h | max abs error | published (HF method) | threshold | status | wall time (s) |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        out.append(
            f"| {r['case']} | {r['m']} | 1/{round(1 / r['h'])} | {r['error']:.6e} | {r['published']:.6e} "
            f"| {r['threshold']:.0e} | {'PASS' if r['passed'] else 'FAIL'} | {r['wall_time']:.3f} |"
        )
    out += ["", "## Published errors of other methods", ""]
    for r in rows:
        out += [f"### {r['case']}: {r['label']}", "", "| method | h | max abs error |", "|---|---|---|"]
        out.append(f"| HF method (this run) | 1/{round(1 / r['h'])} | {r['error']:.6e} |")
        for method, step, err in r["baselines"]:
            out.append(f"| {method} | {step} | {err:.6e} |")
        out.append("")
    if sweeps:
        out += [
            "## Refinement sweep",
            "",
            f"Errors at or below {ROUNDING_FLOOR:g} are rounding noise; their order carries no information.",
            "",
            "| case | m | max abs error | trend |",
            "|---|---|---|---|",
        ]
        for case, pts in sweeps.items():
            trend = refinement_trend(e for _, e in pts)
            for m, err in pts:
                out.append(f"| {case} | {m} | {err:.6e} | {trend} |")
        out.append("")
    return "\n".join(out)
