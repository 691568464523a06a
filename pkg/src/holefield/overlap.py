"""Circle-circle intersection geometry for the two-hole estimators.

Covers: intersection-point coordinates of two equal-radius circles, the
kernel integral over their overlap lens, the lens area, and the mean
pairwise overlap area used by the mean-field approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import disk_kernel_adaptive
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_2d

_DEGENERATE_EPS = 1e-9


class NoOverlapError(ValueError):
    """The two circles do not intersect (center separation >= 2D)."""


class DegenerateOverlapError(ValueError):
    """The two circles are (numerically) coincident; use the full-hole path."""


@dataclass(frozen=True)
class HolePair:
    """Two hole centers at distances v1 <= v2 from the origin, with angular
    separation phi, both of radius D."""

    v1: float
    v2: float
    phi: float
    D: float

    def __post_init__(self) -> None:
        if not (0.0 < self.D <= self.v1 <= self.v2):
            raise ValueError(f"need 0 < D <= v1 <= v2, got {self}")
        if not (-math.pi <= self.phi <= math.pi):
            raise ValueError(f"phi must lie in [-pi, pi], got {self.phi}")

    @property
    def center1(self) -> tuple[float, float]:
        return (self.v1, 0.0)

    @property
    def center2(self) -> tuple[float, float]:
        return (self.v2 * math.cos(self.phi), self.v2 * math.sin(self.phi))


@dataclass(frozen=True)
class IntersectionPoints:
    u1t1: tuple[float, float]
    u2t2: tuple[float, float]
    w: float


def center_separation(pair: HolePair) -> float:
    """Distance between the two hole centers.

    Algebraically the law of cosines, but written with the half-angle form
    (v1-v2)^2 + 4 v1 v2 sin^2(phi/2), which stays accurate when the centers
    nearly coincide (the naive form cancels catastrophically there).
    """
    half = math.sin(0.5 * pair.phi)
    w2 = (pair.v1 - pair.v2) ** 2 + 4.0 * pair.v1 * pair.v2 * half * half
    return math.sqrt(max(w2, 0.0))


def phi_hat(v1: float, v2: float, D: float) -> float:
    """Critical angle below which the two holes overlap.

    Returns 0 when the circles cannot overlap for any angle
    (|v1 - v2| >= 2D) and pi when they overlap for every angle.
    """
    if abs(v1 - v2) >= 2.0 * D:
        return 0.0
    arg = (v1 * v1 + v2 * v2 - 4.0 * D * D) / (2.0 * v1 * v2)
    if arg <= -1.0:
        return math.pi
    return math.acos(min(1.0, arg))


def intersection_points(pair: HolePair) -> IntersectionPoints:
    """Coordinates of the two points where the circles intersect.

    Requires strict partial overlap: 0 < w < 2D.
    """
    w = center_separation(pair)
    D = pair.D
    if w >= 2.0 * D:
        raise NoOverlapError(f"center separation {w} >= 2D = {2 * D}")
    if w <= _DEGENERATE_EPS * D:
        raise DegenerateOverlapError(
            f"centers coincide to within {_DEGENERATE_EPS}*D; use the full-hole path"
        )
    y1x, _ = pair.center1
    y2x, y2y = pair.center2
    q = math.sqrt(max(4.0 * D * D / (w * w) - 1.0, 0.0))
    u1 = 0.5 * (y1x + y2x + q * y2y)
    t1 = 0.5 * (y2y + q * (y1x - y2x))
    u2 = 0.5 * (y1x + y2x - q * y2y)
    t2 = 0.5 * (y2y - q * (y1x - y2x))
    return IntersectionPoints((u1, t1), (u2, t2), w)


def lens_area(z_hat: float, D: float) -> float:
    """Area of the intersection of two radius-D circles with centers z_hat
    apart; pi D^2 at z_hat = 0, zero from tangency onward."""
    if z_hat < 0:
        raise ValueError("z_hat must be >= 0")
    if D == 0.0 or z_hat >= 2.0 * D:
        return 0.0
    half = z_hat / (2.0 * D)
    return 2.0 * D * D * math.acos(half) - z_hat * D * math.sqrt(1.0 - half * half)


def mean_overlap_area(lambda1: float, D: float) -> float:
    """Mean total pairwise overlap area of one hole with its neighbors,
    capped at the full hole area.

    The mean count of overlapping neighbors is lambda1 * 4 pi D^2 and the
    mean single overlap is pi D^2 / 4, giving lambda1 pi^2 D^4 before the cap.
    """
    if lambda1 < 0 or D < 0:
        raise ValueError("lambda1 and D must be >= 0")
    return min(lambda1 * math.pi**2 * D**4, math.pi * D * D)


def overlap_kernel_integral(
    pair: HolePair,
    s: float,
    P: float,
    alpha: float,
    spec: QuadSpec = DEFAULT_SPEC,
) -> float:
    """Kernel integral B(v1, v2, phi) over the lens where the two holes
    overlap::

        B = int_{lens} 1 / (1 + ||x||^alpha / (sP)) dx

    Zero when |phi| >= phi_hat (no overlap); for coincident circles the lens
    is the full disk and the single-hole kernel integral is returned.  By
    mirror symmetry of the geometry B(phi) = B(-phi).

    The lens is integrated in a frame aligned with the line joining the two
    centers; there the lens is exactly the x-strip [w - D, D] bounded above
    and below by one arc of each circle, with a single kink at the chord
    (x = w/2) where the binding circle switches.
    """
    sp = s * P
    if sp == 0.0:
        return 0.0
    D = pair.D
    if abs(pair.phi) >= phi_hat(pair.v1, pair.v2, D):
        return 0.0
    # Mirror-symmetric configuration: work with |phi|.
    phi = abs(pair.phi)
    w = center_separation(pair)
    if w >= 2.0 * D:
        return 0.0
    if w <= _DEGENERATE_EPS * D:
        return disk_kernel_adaptive(pair.v1, D, sp, alpha, spec=spec)

    c1x, c1y = pair.v1, 0.0
    c2x, c2y = pair.v2 * math.cos(phi), pair.v2 * math.sin(phi)
    ex, ey = (c2x - c1x) / w, (c2y - c1y) / w

    def kernel(x: float, y: float) -> float:
        gx = c1x + x * ex - y * ey
        gy = c1y + x * ey + y * ex
        rho = math.hypot(gx, gy)
        return 1.0 / (1.0 + rho**alpha / sp)

    def hw_far(x: float) -> float:  # binding arc: circle centered at w
        return math.sqrt(max(D * D - (x - w) ** 2, 0.0))

    def hw_near(x: float) -> float:  # binding arc: circle centered at 0
        return math.sqrt(max(D * D - x * x, 0.0))

    total = 0.0
    pieces = [
        ((w - D, w / 2.0), hw_far),
        ((w / 2.0, D), hw_near),
    ]
    for (x0, x1), hw in pieces:
        if x1 <= x0:
            continue
        res = integrate_2d(
            kernel,
            (x0, x1),
            lambda x, hw=hw: -hw(x),
            lambda x, hw=hw: hw(x),
            spec,
        )
        total += res.value
    return total
