"""Hybrid-function (HF) representation on a uniform grid.

A function on ``[0, T]`` is represented on ``m`` subintervals of width
``h = T / m`` by two coefficient vectors: ``cs`` multiplies the
sample-and-hold functions ``S_i`` (unit on ``[ih, (i+1)h)``) and ``ct``
multiplies the right-handed triangular functions ``T_i`` (ramp from 0 to 1
over the same subinterval). Sampling a function sets ``cs[i] = f(ih)`` and
``ct[i] = f((i+1)h) - f(ih)``, i.e. the pair encodes the piecewise-linear
interpolant through the ``m + 1`` nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, SamplingError, ShapeError

__all__ = [
    "Grid",
    "HfPair",
    "sample",
    "from_nodes",
    "evaluate",
    "multiply",
    "power",
    "inner_products",
]


@dataclass(frozen=True)
class Grid:
    """Uniform partition of ``[0, t_end]`` into ``m`` subintervals."""

    t_end: float
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"grid needs m >= 1 subintervals, got {self.m!r}")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise DomainError(f"grid needs a positive finite t_end, got {self.t_end!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "t_end", float(self.t_end))

    @property
    def h(self) -> float:
        return self.t_end / self.m

    def nodes(self) -> np.ndarray:
        """The ``m + 1`` node abscissae ``0, h, ..., mh``; the last is ``t_end`` exactly."""
        t = np.arange(self.m + 1) * self.h
        t[-1] = self.t_end
        return t


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class HfPair:
    """SHF coefficients ``cs`` and TF coefficients ``ct`` on ``grid``."""

    grid: Grid
    cs: np.ndarray
    ct: np.ndarray

    def __post_init__(self):
        cs = _frozen(self.cs)
        ct = _frozen(self.ct)
        if cs.shape != (self.grid.m,) or ct.shape != (self.grid.m,):
            raise ShapeError(
                f"coefficient vectors must have length {self.grid.m}, "
                f"got {cs.shape} and {ct.shape}"
            )
        object.__setattr__(self, "cs", cs)
        object.__setattr__(self, "ct", ct)

    @classmethod
    def zeros(cls, grid: Grid) -> "HfPair":
        return cls(grid, np.zeros(grid.m), np.zeros(grid.m))

    def node_values(self) -> np.ndarray:
        """Left-node values ``cs`` followed by the right-endpoint limit at ``t_end``."""
        return np.append(self.cs, self.cs[-1] + self.ct[-1])

    def _check(self, other: "HfPair"):
        if not isinstance(other, HfPair):
            return NotImplemented
        if other.grid != self.grid:
            raise ShapeError(f"grid mismatch: {self.grid} vs {other.grid}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return HfPair(self.grid, self.cs + other.cs, self.ct + other.ct)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return HfPair(self.grid, self.cs - other.cs, self.ct - other.ct)

    def __neg__(self):
        return HfPair(self.grid, -self.cs, -self.ct)

    def scale(self, c: float) -> "HfPair":
        return HfPair(self.grid, c * self.cs, c * self.ct)

    def __eq__(self, other):
        if not isinstance(other, HfPair):
            return NotImplemented
        return (
            self.grid == other.grid
            and np.array_equal(self.cs, other.cs)
            and np.array_equal(self.ct, other.ct)
        )

    __hash__ = None


def from_nodes(grid: Grid, values) -> HfPair:
    """Build the pair interpolating ``values`` at the ``m + 1`` grid nodes."""
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.m + 1,):
        raise ShapeError(f"need {grid.m + 1} node values, got shape {v.shape}")
    return HfPair(grid, v[:-1], np.diff(v))


def sample(f: Callable, grid: Grid) -> HfPair:
    """Expand ``f`` in the HF basis by evaluating it at every grid node.

    ``f`` is called once with the array of node abscissae when it accepts
    arrays, otherwise node by node.
    """
    t = grid.nodes()
    try:
        v = np.asarray(f(t), dtype=float)
        if v.shape == ():
            v = np.full(t.shape, float(v))
        elif v.shape != t.shape:
            raise TypeError
    except (TypeError, ValueError):
        v = np.array([float(f(float(ti))) for ti in t])
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        i = int(bad[0])
        raise SamplingError(f"non-finite value {v[i]!r} at node {i} (t = {t[i]!r})", node=i)
    return from_nodes(grid, v)


def evaluate(p: HfPair, t):
    """Evaluate the piecewise-linear HF expansion at ``t`` (scalar or array).

    At ``t == t_end`` the right-endpoint limit ``cs[m-1] + ct[m-1]`` is
    returned even though the basis supports are half-open.
    """
    g = p.grid
    ta = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(ta)) or np.any(ta < 0) or np.any(ta > g.t_end):
        raise DomainError(f"t must lie in [0, {g.t_end}], got {t!r}")
    i = np.floor(ta / g.h).astype(int)
    # t / h can round just below an integer at a node abscissa ih
    i = np.where((i + 1) * g.h <= ta, i + 1, i)
    i = np.clip(i, 0, g.m - 1)
    theta = (ta - i * g.h) / g.h
    out = p.cs[i] + theta * p.ct[i]
    at_end = ta == g.t_end
    out = np.where(at_end, p.cs[-1] + p.ct[-1], out)
    return float(out) if out.ndim == 0 else out


def multiply(p: HfPair, q: HfPair) -> HfPair:
    """HF product rule: the result interpolates ``p * q`` at the nodes."""
    if p.grid != q.grid:
        raise ShapeError(f"grid mismatch: {p.grid} vs {q.grid}")
    cs = p.cs * q.cs
    ct = p.cs * q.ct + p.ct * q.cs + p.ct * q.ct
    return HfPair(p.grid, cs, ct)


def _is_integer(n: float) -> bool:
    return float(n).is_integer()


def power(p: HfPair, n: float) -> HfPair:
    """Raise the node values of ``p`` to the power ``n`` and re-interpolate."""
    y = p.node_values()
    if not _is_integer(n):
        neg = np.flatnonzero(y < 0)
        if neg.size:
            i = int(neg[0])
            raise DomainError(
                f"negative base {y[i]!r} at node {i} with non-integer exponent {n!r}"
            )
    elif float(n) < 0:
        zero = np.flatnonzero(y == 0)
        if zero.size:
            raise DomainError(f"zero base at node {int(zero[0])} with negative exponent {n!r}")
    if float(n) == 1.0:
        v = y
    elif _is_integer(n) and n > 0:
        v = y ** int(n)
    else:
        v = y ** float(n)
    return from_nodes(p.grid, v)


def inner_products(i: int, j: int, grid: Grid, kind: str) -> float:
    """Integral over ``[0, T]`` of a product of two basis functions.

    ``kind`` is ``"SS"``, ``"TT"`` or ``"ST"`` (``S_i`` times ``T_j``).
    Distinct indices have disjoint supports and give zero.
    """
    if not (0 <= i < grid.m and 0 <= j < grid.m):
        raise DomainError(f"basis indices must lie in [0, {grid.m}), got {i}, {j}")
    kind = kind.upper()
    diag = {"SS": 1.0, "TT": 1.0 / 3.0, "ST": 0.5, "TS": 0.5}
    if kind not in diag:
        raise ValueError(f"kind must be one of SS, TT, ST; got {kind!r}")
    return diag[kind] * grid.h if i == j else 0.0
