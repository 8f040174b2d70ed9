"""Shared test utilities."""

import numpy as np

_X, _W = np.polynomial.legendre.leggauss(20)


def gl_integral(f, edges):
    """Integral of ``f`` by 20-point Gauss-Legendre on each panel ``[edges[k], edges[k+1]]``."""
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * float(np.dot(_W, f(mid + half * _X)))
    return total
