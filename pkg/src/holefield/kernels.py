"""Radial kernel integrals shared by the analytical estimators.

The basic object is the integral of the interference kernel over a circular
hole of radius D centered at distance v from the origin, reduced to polar
form::

    K(v; lo) = int_lo^{v+D}  2 * arccos((r^2 + v^2 - D^2) / (2 v r))
               * r / (1 + r^alpha / (s P))  dr

(i.e. the hole's area integral of 1/(1 + ||x||^alpha/(sP)) written as a radial
strip integral).  The estimators multiply this by lambda2 as needed.

Two evaluators are provided:

- ``disk_kernel_adaptive``: scalar, adaptive quadrature, arbitrary accuracy.
  Used by the public single-hole operations.
- ``disk_kernel``: vectorized fixed graded Gauss-Legendre composite rule.
  The arccos factor has square-root behavior at both endpoints r = v -+ D,
  so the panels are geometrically graded toward the endpoints.  Used inside
  the nested integrals of the bound estimators, where millions of kernel
  evaluations are needed.

The arccos argument is clamped to [-1, 1]: floating-point drift produces
arguments like 1 + 1e-16 at the endpoints, and for holes containing the
origin (v < D) the over-unity argument below r = D - v correctly saturates
to a full ring (theta = pi).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .quadrature import DEFAULT_SPEC, QuadSpec, integrate


@lru_cache(maxsize=None)
def _graded_rule(order: int = 12, levels: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on [0, 1], panels graded
    geometrically (ratio 4) toward both endpoints."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1.0) / 2.0
    w = w / 2.0
    left = [0.0] + [0.5 * 4.0 ** (k - levels) for k in range(levels)] + [0.5]
    breaks = np.array(left + [1.0 - b for b in reversed(left[:-1])])
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        nodes.append(a + (b - a) * x)
        weights.append((b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def disk_kernel(
    v: np.ndarray | float,
    lo: np.ndarray | float,
    D: float,
    sp: float,
    alpha: float,
) -> np.ndarray:
    """Vectorized K(v; lo); v and lo broadcast.  lo is clipped to
    [max(0, v - D), v + D]; an empty range contributes 0."""
    if sp == 0.0 or D == 0.0:
        return np.zeros(np.broadcast(v, lo).shape)
    v = np.asarray(v, dtype=float)
    lo = np.asarray(lo, dtype=float)
    t, wt = _graded_rule()
    a = np.maximum(np.maximum(v - D, 0.0), lo)
    b = v + D
    length = np.maximum(b - a, 0.0)
    r = a[..., None] + length[..., None] * t
    arg = (r * r + (v * v - D * D)[..., None]) / (2.0 * v[..., None] * r)
    theta = np.arccos(np.clip(arg, -1.0, 1.0))
    integrand = 2.0 * theta * r / (1.0 + r**alpha / sp)
    return length * np.einsum("...j,j->...", integrand, wt)


def disk_kernel_adaptive(
    v: float,
    D: float,
    sp: float,
    alpha: float,
    r_lo: float | None = None,
    spec: QuadSpec = DEFAULT_SPEC,
) -> float:
    """Scalar K(v; r_lo) by adaptive quadrature.

    Supports any v >= 0, including holes containing the origin (v < D).
    """
    if sp == 0.0 or D == 0.0:
        return 0.0
    hi = v + D
    lo = max(v - D, 0.0)
    if r_lo is not None:
        lo = max(lo, r_lo)
    if lo >= hi:
        return 0.0
    vv_dd = v * v - D * D

    def f(r: float) -> float:
        if r == 0.0:
            return 0.0
        den = 2.0 * v * r
        if den == 0.0:
            theta = math.pi if r < D else 0.0
        else:
            theta = math.acos(min(1.0, max(-1.0, (r * r + vv_dd) / den)))
        return 2.0 * theta * r / (1.0 + r**alpha / sp)

    # Interior kink where the clamp saturates (hole covers the full ring).
    breaks = [D - v] if 0.0 < D - v < hi else []
    return integrate(f, lo, hi, spec, breakpoints=breaks).value
