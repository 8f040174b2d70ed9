"""One-shot operational matrices of Riemann-Liouville fractional integration.

For order ``alpha`` the fractional integral of the SHF vector is written as
``P_ss S + P_st T`` and that of the TF vector as ``P_ts S + P_tt T``. All
four matrices are upper-triangular Toeplitz, so only their first rows are
stored::

    P_ss = h^a / G(a+1) [0, s_1, ..., s_{m-1}]     s_k = k^a - (k-1)^a
    P_st = h^a / G(a+1) [1, x_1, ..., x_{m-1}]     x_k = s_{k+1} - s_k
    P_ts = h^a / G(a+2) [0, f_1, ..., f_{m-1}]     f_k = k^(a+1) - (k-1)^a (k+a)
    P_tt = h^a / G(a+2) [1, p_1, ..., p_{m-1}]     p_k = f_{k+1} - f_k

Applying them to the coefficients of an HF pair gives the exact node values
of the fractional integral of the pair's piecewise-linear interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ShapeError
from .hf_basis import Grid, HfPair

__all__ = [
    "ALPHA_MAX",
    "gamma",
    "step_increments",
    "step_second_differences",
    "ramp_increments",
    "ramp_second_differences",
    "UtToeplitz",
    "OpMatSet",
    "build",
    "apply_row",
    "frac_integrate",
]

ALPHA_MAX = 50.0

# closed forms are used as written only at k = 1, where the stable forms are singular
_DIRECT_MAX_K = 1
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _gamma_scalar(x):
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma is defined here for finite x > 0, got {x!r}")
    return math.gamma(x)


def gamma(x):
    """Euler gamma function for ``x > 0``; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return _gamma_scalar(x)
    xa = np.asarray(x, dtype=float)
    return np.array([_gamma_scalar(v) for v in xa.ravel()]).reshape(xa.shape)


def _check_alpha(alpha) -> float:
    a = float(alpha)
    if not (math.isfinite(a) and 0 < a <= ALPHA_MAX):
        raise DomainError(f"order alpha must lie in (0, {ALPHA_MAX:g}], got {alpha!r}")
    return a


def _integer_order(alpha: float):
    return int(alpha) if alpha.is_integer() else None


# Each generator returns entries for k = 1..n as a float array.


def step_increments(alpha: float, n: int) -> np.ndarray:
    """``k^a - (k-1)^a`` for ``k = 1..n``."""
    a = _check_alpha(alpha)
    ia = _integer_order(a)
    if ia is not None:
        return np.array([float(k**ia - (k - 1) ** ia) for k in range(1, n + 1)])
    k = np.arange(1, n + 1, dtype=float)
    out = k**a - (k - 1) ** a
    big = k > _DIRECT_MAX_K
    kb = k[big]
    # k^a (1 - (1 - 1/k)^a) without the cancellation of the direct difference
    out[big] = kb**a * -np.expm1(a * np.log1p(-1.0 / kb))
    return out


def _double_gl(k: np.ndarray, expo: float, weight_tau: bool) -> np.ndarray:
    """``int_0^1 int_0^1 [tau] (k - tau + sigma)^expo dsigma dtau`` for each k."""
    tau = _GL_X[:, None]
    sig = _GL_X[None, :]
    w = _GL_W[:, None] * _GL_W[None, :]
    if weight_tau:
        w = w * tau
    base = k[:, None, None] - tau[None] + sig[None]
    return np.einsum("kij,ij->k", base**expo, w)


def step_second_differences(alpha: float, n: int) -> np.ndarray:
    """``(k+1)^a - 2k^a + (k-1)^a`` for ``k = 1..n``."""
    a = _check_alpha(alpha)
    ia = _integer_order(a)
    if ia is not None:
        return np.array(
            [float((k + 1) ** ia - 2 * k**ia + (k - 1) ** ia) for k in range(1, n + 1)]
        )
    k = np.arange(1, n + 1, dtype=float)
    out = (k + 1) ** a - 2 * k**a + (k - 1) ** a
    big = k > _DIRECT_MAX_K
    if big.any():
        out[big] = a * (a - 1) * _double_gl(k[big], a - 2, weight_tau=False)
    return out


def ramp_increments(alpha: float, n: int) -> np.ndarray:
    """``k^(a+1) - (k-1)^a (k+a)`` for ``k = 1..n``."""
    a = _check_alpha(alpha)
    ia = _integer_order(a)
    if ia is not None:
        return np.array(
            [float(k ** (ia + 1) - (k - 1) ** ia * (k + ia)) for k in range(1, n + 1)]
        )
    k = np.arange(1, n + 1, dtype=float)
    out = k ** (a + 1) - (k - 1) ** a * (k + a)
    big = k > _DIRECT_MAX_K
    if big.any():
        kb = k[big]
        tau = _GL_X[None, :]
        out[big] = a * (a + 1) * ((kb[:, None] - tau) ** (a - 1) * tau) @ _GL_W
    return out


def ramp_second_differences(alpha: float, n: int) -> np.ndarray:
    """``(k+1)^(a+1) - (k+1+a) k^a - k^(a+1) + (k+a)(k-1)^a`` for ``k = 1..n``."""
    a = _check_alpha(alpha)
    ia = _integer_order(a)
    if ia is not None:
        return np.array(
            [
                float(
                    (k + 1) ** (ia + 1)
                    - (k + 1 + ia) * k**ia
                    - k ** (ia + 1)
                    + (k + ia) * (k - 1) ** ia
                )
                for k in range(1, n + 1)
            ]
        )
    k = np.arange(1, n + 1, dtype=float)
    out = (k + 1) ** (a + 1) - (k + 1 + a) * k**a - k ** (a + 1) + (k + a) * (k - 1) ** a
    big = k > _DIRECT_MAX_K
    if big.any():
        out[big] = a * (a + 1) * (a - 1) * _double_gl(k[big], a - 2, weight_tau=True)
    return out


@dataclass(frozen=True, eq=False)
class UtToeplitz:
    """Upper-triangular Toeplitz matrix: entry ``(i, j)`` is ``first_row[j - i]`` for ``j >= i``."""

    first_row: np.ndarray

    def __post_init__(self):
        r = np.array(self.first_row, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise ShapeError("first_row must be a non-empty vector")
        r.flags.writeable = False
        object.__setattr__(self, "first_row", r)

    @property
    def m(self) -> int:
        return self.first_row.size

    def dense(self) -> np.ndarray:
        m = self.m
        i, j = np.indices((m, m))
        return np.where(j >= i, self.first_row[np.clip(j - i, 0, m - 1)], 0.0)


@dataclass(frozen=True, eq=False)
class OpMatSet:
    alpha: float
    grid: Grid
    pss: UtToeplitz
    pst: UtToeplitz
    pts: UtToeplitz
    ptt: UtToeplitz


def build(alpha: float, grid: Grid) -> OpMatSet:
    """Operational matrices of order ``alpha`` on ``grid`` (cached)."""
    a = _check_alpha(alpha)
    return _build_cached(a, grid.m, grid.t_end)


def _scales(alpha: float, h: float):
    ia = _integer_order(alpha)
    if ia is not None:
        return h**ia / math.factorial(ia), h**ia / math.factorial(ia + 1)
    return h**alpha / gamma(alpha + 1), h**alpha / gamma(alpha + 2)


@lru_cache(maxsize=256)
def _unscaled_rows(alpha: float, m: int):
    n = m - 1
    return (
        np.concatenate(([0.0], step_increments(alpha, n))),
        np.concatenate(([1.0], step_second_differences(alpha, n))),
        np.concatenate(([0.0], ramp_increments(alpha, n))),
        np.concatenate(([1.0], ramp_second_differences(alpha, n))),
    )


@lru_cache(maxsize=256)
def _build_cached(alpha: float, m: int, t_end: float) -> OpMatSet:
    grid = Grid(t_end, m)
    s_scale, t_scale = _scales(alpha, grid.h)
    ss, st, ts, tt = _unscaled_rows(alpha, m)
    rows = (s_scale * ss, s_scale * st, t_scale * ts, t_scale * tt)
    return OpMatSet(alpha, grid, *(UtToeplitz(r) for r in rows))


def apply_row(coeffs, M: UtToeplitz) -> np.ndarray:
    """Row-vector product ``coeffs^T M``: ``out[j] = sum_{i<=j} coeffs[i] * first_row[j-i]``."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (M.m,):
        raise ShapeError(f"coefficient vector of length {c.size} vs matrix dimension {M.m}")
    return np.convolve(c, M.first_row)[: M.m]


def frac_integrate(p: HfPair, alpha: float) -> HfPair:
    """HF coefficients of the order-``alpha`` Riemann-Liouville integral of ``p``.

    Equal to ``p.cs^T pss + p.ct^T pts`` and ``p.cs^T pst + p.ct^T ptt``, but
    the common factor ``h^alpha / G(alpha + 2)`` is applied once after the
    convolutions (the step rows carry ``alpha + 1`` times it). For integer
    orders and dyadic data the bracket is then exact and the result is
    correctly rounded.
    """
    a = _check_alpha(alpha)
    m = p.grid.m
    _, t_scale = _scales(a, p.grid.h)
    ss, st, ts, tt = _unscaled_rows(a, m)
    a1 = a + 1.0
    cs = a1 * np.convolve(p.cs, ss)[:m] + np.convolve(p.ct, ts)[:m]
    ct = a1 * np.convolve(p.cs, st)[:m] + np.convolve(p.ct, tt)[:m]
    return HfPair(p.grid, t_scale * cs, t_scale * ct)
