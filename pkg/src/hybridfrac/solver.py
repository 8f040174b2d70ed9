"""Hybrid-function solver for multi-order fractional differential equations.

Solves, on ``[0, t_end]``,

    D^alpha y(t) = sum_k b_k(t) (D^beta_k y(t))^p_k + g(t)

with Caputo derivatives and initial values ``y^(s)(0) = init[s]`` for
``s < ceil(alpha)``. The highest derivative ``u = D^alpha v`` of the
homogeneous part ``v = y - ic_poly`` is expanded in hybrid functions; every
lower-order derivative is ``J^(alpha - beta) u`` plus the known Caputo
derivative of the initial-value polynomial. Equating SHF and TF coefficients
gives a causal system that is solved subinterval by subinterval: the SHF
coefficient at ``j`` is explicit, the TF coefficient at ``j`` solves one
scalar equation (linear in the linear case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import expr as _expr
from .errors import ConvergenceError, DomainError
from .hf_basis import Grid, HfPair, from_nodes, multiply, power, sample
from .opmat import ALPHA_MAX, build, frac_integrate, gamma

__all__ = [
    "Term",
    "FdeProblem",
    "SolverOptions",
    "Solution",
    "solve",
    "residual",
    "ic_polynomial",
    "ic_caputo",
]

# orders closer than this to alpha act as the identity operator
IDENTITY_GAP = 1e-12


def _as_expr(e):
    return _expr.parse(e) if isinstance(e, str) else e


@dataclass(frozen=True)
class Term:
    """One right-hand-side term ``coeff(t) * (D^beta y)^power``."""

    coeff: _expr.Expr
    beta: float
    power: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_expr(self.coeff))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "power", float(self.power))


@dataclass(frozen=True)
class FdeProblem:
    """``D^alpha y = sum(terms) + forcing`` with initial values ``init``.

    ``generalized`` permits non-unit powers on derivative terms
    (``beta > 0``); by default only ``y`` itself may appear nonlinearly.
    """

    alpha: float
    terms: Sequence[Term]
    forcing: _expr.Expr
    init: Sequence[float]
    t_end: float = 1.0
    generalized: bool = False

    def __post_init__(self):
        a = float(self.alpha)
        if not (math.isfinite(a) and 0 < a <= ALPHA_MAX):
            raise DomainError(f"alpha must lie in (0, {ALPHA_MAX:g}], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        terms = tuple(sorted(self.terms, key=lambda tm: -tm.beta))
        for tm in terms:
            if not (0 <= tm.beta < a):
                raise DomainError(f"term order beta={tm.beta!r} must lie in [0, alpha={a!r})")
            if tm.beta > 0 and tm.power != 1 and not self.generalized:
                raise DomainError(
                    f"term with beta={tm.beta!r} has power {tm.power!r}; "
                    "non-unit powers on derivatives need generalized=True"
                )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "forcing", _as_expr(self.forcing))
        init = tuple(float(v) for v in self.init)
        if len(init) != self.n:
            raise DomainError(f"alpha={a!r} needs {self.n} initial values, got {len(init)}")
        object.__setattr__(self, "init", init)
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise DomainError(f"t_end must be positive, got {self.t_end!r}")
        object.__setattr__(self, "t_end", float(self.t_end))

    @property
    def n(self) -> int:
        return max(1, math.ceil(self.alpha))


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-13
    max_iter: int = 100
    damping: float = 0.5
    damping_after: int = 20


@dataclass(frozen=True, eq=False)
class Solution:
    """Result of :func:`solve`.

    ``u`` holds the HF coefficients of ``D^alpha`` of the homogeneous part,
    ``y`` the reconstructed unknown. ``iterations[j]`` counts scalar
    iterations spent on the TF coefficient of subinterval ``j``.
    """

    grid: Grid
    u: HfPair
    y: HfPair
    iterations: np.ndarray
    residual: float = field(default=math.nan)

    @property
    def max_iterations(self) -> int:
        return int(self.iterations.max())


def ic_polynomial(init: Sequence[float]):
    """``t -> sum_s init[s] t^s / s!``."""
    init = tuple(init)

    def f(t):
        t = np.asarray(t, dtype=float)
        return sum(c * t**s / math.factorial(s) for s, c in enumerate(init)) + 0 * t

    return f


def ic_caputo(init: Sequence[float], beta: float):
    """Caputo derivative of order ``beta`` of the initial-value polynomial."""
    init = tuple(init)
    if beta == 0:
        return ic_polynomial(init)
    s0 = math.ceil(beta)

    def f(t):
        t = np.asarray(t, dtype=float)
        out = 0 * t
        for s in range(s0, len(init)):
            if init[s]:
                out = out + init[s] * t ** (s - beta) / gamma(s - beta + 1)
        return out

    return f


def _sample_expr(e, grid):
    return sample(lambda t: _expr.evaluate(e, t), grid)


@dataclass
class _Op:
    """Per-term data for the forward substitution."""

    coeff: HfPair
    known: HfPair
    power: float
    rows: tuple | None  # (pss, pst, pts, ptt) first rows, or None for identity

    @property
    def linear(self):
        return self.power == 1.0


def _prepare(problem: FdeProblem, grid: Grid):
    g = _sample_expr(problem.forcing, grid)
    zero_ics = not any(problem.init)
    ops = []
    identity_scale = np.ones(grid.m + 1)
    for tm in problem.terms:
        b = _sample_expr(tm.coeff, grid)
        known = HfPair.zeros(grid) if zero_ics else sample(ic_caputo(problem.init, tm.beta), grid)
        order = problem.alpha - tm.beta
        if order < IDENTITY_GAP:
            if tm.power != 1.0:
                raise DomainError(
                    f"term with beta={tm.beta!r} is within {IDENTITY_GAP:g} of alpha "
                    "and must be linear"
                )
            # b (u + known) moves to the left-hand side
            g = g + multiply(b, known)
            identity_scale -= b.node_values()
            continue
        r = build(order, grid)
        rows = (r.pss.first_row, r.pst.first_row, r.pts.first_row, r.ptt.first_row)
        ops.append(_Op(b, known, tm.power, rows))
    if np.any(identity_scale != 1.0):
        if np.any(identity_scale == 0.0):
            raise DomainError("coefficient of an identity-order term cancels D^alpha y")
        inv = from_nodes(grid, 1.0 / identity_scale)
        g = multiply(g, inv)
        for op in ops:
            op.coeff = multiply(op.coeff, inv)
    return g, ops


def _pow(x, p, j):
    if p == 1.0:
        return x
    if x < 0 and not float(p).is_integer():
        raise DomainError(f"negative base {x!r} with non-integer power {p!r} at node {j}")
    return x**p


def solve(problem: FdeProblem, m: int, opts: SolverOptions | None = None) -> Solution:
    """Solve ``problem`` on ``m`` equal subintervals by forward substitution."""
    opts = opts or SolverOptions()
    grid = Grid(problem.t_end, m)
    g, ops = _prepare(problem, grid)
    linear = all(op.linear for op in ops)

    cs_u = np.zeros(m)
    ct_u = np.zeros(m)
    iterations = np.zeros(m, dtype=int)
    gcs, gct = g.cs, g.ct

    for j in range(m):
        # SHF equation: explicit, J^gamma has no diagonal in its SHF-to-SHF part
        ycs = []
        rhs = gcs[j]
        for op in ops:
            pss, pst, pts, ptt = op.rows
            y = np.dot(cs_u[:j], pss[j:0:-1]) + np.dot(ct_u[:j], pts[j:0:-1]) + op.known.cs[j]
            ycs.append(y)
            rhs += op.coeff.cs[j] * _pow(y, op.power, j)
        cs_u[j] = rhs

        # TF equation: each term's TF part is a + c * x in the unknown x = ct_u[j]
        parts = []
        for op, y in zip(ops, ycs):
            pss, pst, pts, ptt = op.rows
            a = (
                np.dot(cs_u[:j], pst[j:0:-1])
                + np.dot(ct_u[:j], ptt[j:0:-1])
                + cs_u[j] * pst[0]
                + op.known.ct[j]
            )
            parts.append((op, y, a, ptt[0]))

        # linear terms contribute const + slope * x and are solved for exactly
        const = gct[j]
        slope = 0.0
        nonlinear = []
        for op, y, a, c in parts:
            bs, bt = op.coeff.cs[j], op.coeff.ct[j]
            if op.linear:
                const += bt * y + (bs + bt) * a
                slope += (bs + bt) * c
            else:
                yp = _pow(y, op.power, j)
                nonlinear.append((bs, bt, y, yp, a, c, op.power))
        denom = 1.0 - slope
        if denom == 0.0:
            raise DomainError(f"singular TF equation at subinterval {j}")
        if linear:
            ct_u[j] = const / denom
            iterations[j] = 1
            continue

        def tf_rhs(x):
            total = const
            for bs, bt, y, yp, a, c, p in nonlinear:
                total += bt * yp + (bs + bt) * (_pow(y + a + c * x, p, j + 1) - yp)
            return total / denom

        x = ct_u[j - 1] if j else 0.0
        for it in range(1, opts.max_iter + 1):
            with np.errstate(over="ignore", invalid="ignore"):
                fx = tf_rhs(x)
            step = fx - x
            if it > opts.damping_after:
                step *= opts.damping
            x_new = x + step
            if not math.isfinite(x_new):
                raise ConvergenceError(f"iteration diverged at node {j + 1} (subinterval {j})", node=j + 1)
            if abs(x_new - x) <= opts.tol * max(1.0, abs(x_new)):
                x = x_new
                break
            x = x_new
        else:
            raise ConvergenceError(
                f"no convergence within {opts.max_iter} iterations at node {j + 1} "
                f"(subinterval {j}); last step {float(abs(step)):.3g}",
                node=j + 1,
            )
        ct_u[j] = x
        iterations[j] = it

    u = HfPair(grid, cs_u, ct_u)
    y = frac_integrate(u, problem.alpha)
    if any(problem.init):
        y = y + sample(ic_polynomial(problem.init), grid)
    sol = Solution(grid, u, y, iterations)
    return Solution(grid, u, y, iterations, residual(problem, sol))


def residual(problem: FdeProblem, sol: Solution) -> float:
    """Max over nodes of ``|D^alpha y - RHS|`` with operators applied in the HF domain."""
    grid = sol.grid
    u = sol.u
    rhs = _sample_expr(problem.forcing, grid)
    zero_ics = not any(problem.init)
    for tm in problem.terms:
        b = _sample_expr(tm.coeff, grid)
        order = problem.alpha - tm.beta
        d = u if order < IDENTITY_GAP else frac_integrate(u, order)
        if not zero_ics:
            d = d + sample(ic_caputo(problem.init, tm.beta), grid)
        if tm.power != 1.0:
            d = power(d, tm.power)
        rhs = rhs + multiply(b, d)
    return float(np.max(np.abs(u.node_values() - rhs.node_values())))
