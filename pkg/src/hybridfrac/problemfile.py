"""JSON problem files.

Example::

    {
      "alpha": 2,
      "terms": [{"coeff": "-1", "beta": 0.5}, {"coeff": "-1", "beta": 0}],
      "forcing": "t^3 + 6*t + (3.2/gamma(0.5))*t^2.5",
      "init": [0, 0],
      "t_end": 1,
      "exact": "t^3"
    }

``power`` defaults to 1 and ``t_end`` to 1; ``exact`` is optional. Unknown
keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import expr as _expr
from .errors import HybridFracError
from .solver import FdeProblem, Term

__all__ = ["ProblemFileError", "load_problem", "parse_problem", "problem_to_dict", "dump_problem"]

_TOP_KEYS = {"alpha", "terms", "forcing", "init", "t_end", "exact"}
_REQUIRED = {"alpha", "terms", "forcing", "init"}
_TERM_KEYS = {"coeff", "beta", "power"}


class ProblemFileError(HybridFracError, ValueError):
    pass


def _number(doc, key, where):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ProblemFileError(f"{where}{key!r} must be a number, got {v!r}")
    return float(v)


def _expression(doc, key, where):
    v = doc[key]
    if not isinstance(v, str):
        raise ProblemFileError(f"{where}{key!r} must be an expression string, got {v!r}")
    return _expr.parse(v)


def parse_problem(doc) -> tuple[FdeProblem, _expr.Expr | None]:
    """Validate a decoded document; returns the problem and the optional exact solution."""
    if not isinstance(doc, dict):
        raise ProblemFileError("problem file must contain a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ProblemFileError(f"unknown keys: {sorted(unknown)}")
    missing = _REQUIRED - set(doc)
    if missing:
        raise ProblemFileError(f"missing keys: {sorted(missing)}")
    if not isinstance(doc["terms"], list):
        raise ProblemFileError("'terms' must be a list")
    terms = []
    for k, td in enumerate(doc["terms"]):
        where = f"terms[{k}]."
        if not isinstance(td, dict):
            raise ProblemFileError(f"terms[{k}] must be an object")
        bad = set(td) - _TERM_KEYS
        if bad:
            raise ProblemFileError(f"unknown keys in terms[{k}]: {sorted(bad)}")
        if not {"coeff", "beta"} <= set(td):
            raise ProblemFileError(f"terms[{k}] needs 'coeff' and 'beta'")
        power = _number(td, "power", where) if "power" in td else 1.0
        terms.append(Term(_expression(td, "coeff", where), _number(td, "beta", where), power))
    init = doc["init"]
    if not isinstance(init, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in init):
        raise ProblemFileError("'init' must be a list of numbers")
    t_end = _number(doc, "t_end", "") if "t_end" in doc else 1.0
    problem = FdeProblem(
        _number(doc, "alpha", ""),
        terms,
        _expression(doc, "forcing", ""),
        init,
        t_end,
        generalized=True,
    )
    exact = _expression(doc, "exact", "") if "exact" in doc else None
    return problem, exact


def load_problem(path) -> tuple[FdeProblem, _expr.Expr | None]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON: {exc}") from exc
    return parse_problem(doc)


def problem_to_dict(problem: FdeProblem, exact=None) -> dict:
    doc = {
        "alpha": problem.alpha,
        "terms": [
            {"coeff": _expr.to_string(tm.coeff), "beta": tm.beta, "power": tm.power}
            for tm in problem.terms
        ],
        "forcing": _expr.to_string(problem.forcing),
        "init": list(problem.init),
        "t_end": problem.t_end,
    }
    if exact is not None:
        doc["exact"] = _expr.to_string(exact)
    return doc


def dump_problem(problem: FdeProblem, path, exact=None) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem, exact), indent=2) + "\n", encoding="utf-8")
