"""Deterministic numerical integration.

Three entry points:

- ``integrate``: adaptive 1D quadrature on a finite interval, with optional
  splitting at known kink points.
- ``integrate_semi_infinite``: [a, inf) by interval doubling with a certified
  analytic tail bound (power-law or empirically-rated exponential majorant).
- ``integrate_2d``: nested adaptive cubature over a y-bounded x-strip.

The finite-interval workhorse is QUADPACK's adaptive Gauss-Kronrod scheme
(via scipy); the semi-infinite truncation logic and tail certificates are
implemented here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate as _sciint


@dataclass(frozen=True)
class QuadSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Raised when the integrator cannot meet the requested tolerance.

    ``partial`` carries the best available QuadResult.
    """

    def __init__(self, message: str, partial: QuadResult | None = None):
        super().__init__(message)
        self.partial = partial


DEFAULT_SPEC = QuadSpec()


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadSpec = DEFAULT_SPEC,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate f on [a, b] to max(abs_tol, rel_tol * |value|).

    ``breakpoints`` lists interior points where the integrand is known to be
    non-smooth (kinks, jump locations); the adaptive scheme splits there
    instead of discovering them by subdivision.
    """
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    pts = sorted(p for p in breakpoints if a < p < b) or None
    nev = [0]

    def wrapped(x: float) -> float:
        nev[0] += 1
        return f(x)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", _sciint.IntegrationWarning)
        value, err = _sciint.quad(
            wrapped,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            points=pts,
        )
    result = QuadResult(value, err, nev[0])
    if any(issubclass(w.category, _sciint.IntegrationWarning) for w in caught):
        if err > max(spec.abs_tol, spec.rel_tol * abs(value)) * 10:
            raise QuadratureError(
                f"integration on [{a}, {b}] did not converge "
                f"(value={value}, error={err})",
                partial=result,
            )
    return result


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    decay_hint: float | None = None,
    spec: QuadSpec = DEFAULT_SPEC,
    exponential: bool = False,
    max_doublings: int = 60,
) -> QuadResult:
    """Integrate f on [a, inf) by truncation with a certified tail bound.

    The truncation point is grown by interval doubling until the tail bound
    falls below abs_tol.  Two tail certificates are supported:

    - power law (``decay_hint`` = p > 1): assumes |f(v)| <= |f(T)| (v/T)^-p for
      v >= T, giving tail <= |f(T)| T / (p - 1);
    - exponential (``exponential=True``): the decay rate is estimated from the
      empirical log-slope of |f| near T and the bound |f(T)|/rate is inflated
      by a factor 2 safety margin.

    f must be eventually monotone decreasing in magnitude.
    """
    if not exponential:
        if decay_hint is None or decay_hint <= 1:
            raise ValueError("power-law decay_hint must be > 1 (or set exponential=True)")

    total = 0.0
    total_err = 0.0
    nev = 0
    lo = a
    length = max(1.0, abs(a))
    prev_corrected = math.inf
    stable_checks = 0
    for i in range(max_doublings):
        hi = lo + length
        piece = integrate(f, lo, hi, spec)
        total += piece.value
        total_err += piece.error_estimate
        nev += piece.evaluations

        fT = abs(f(hi))
        nev += 1
        if exponential:
            x0 = hi - 0.05 * length
            f0 = abs(f(x0))
            nev += 1
            if fT == 0.0:
                tail = 0.0
            elif f0 > fT:
                rate = (math.log(f0) - math.log(fT)) / (hi - x0)
                tail = 2.0 * fT / rate
            else:
                tail = math.inf  # not yet in the decaying regime
        else:
            tail = fT * hi / (decay_hint - 1.0)
        # The certificate tail equals the true remainder exactly when f decays
        # as a pure power law, so it is added as a correction; the change of
        # the corrected value between doublings measures the real residual.
        corrected = total + (0.0 if math.isinf(tail) else tail)
        tol = max(spec.abs_tol, spec.rel_tol * abs(corrected))
        if i > 0 and abs(corrected - prev_corrected) <= tol:
            stable_checks += 1
        else:
            stable_checks = 0
        if tail <= tol:
            return QuadResult(corrected, total_err + tail, nev)
        if stable_checks >= 2:
            return QuadResult(
                corrected, total_err + abs(corrected - prev_corrected) + tol, nev
            )
        prev_corrected = corrected
        lo = hi
        length *= 2.0
    raise QuadratureError(
        f"tail bound not satisfied after {max_doublings} doublings (last tail={tail})",
        partial=QuadResult(total + tail, total_err + tail, nev),
    )


def integrate_2d(
    f: Callable[[float, float], float],
    x_bounds: tuple[float, float],
    y_lo: Callable[[float], float],
    y_hi: Callable[[float], float],
    spec: QuadSpec = DEFAULT_SPEC,
) -> QuadResult:
    """Nested adaptive integration of f(x, y): inner in y, outer in x."""
    (x0, x1) = x_bounds
    if x0 > x1:
        raise ValueError(f"need x_lo <= x_hi, got {x_bounds}")
    if x0 == x1:
        return QuadResult(0.0, 0.0, 0)
    nev = [0]

    def wrapped(y: float, x: float) -> float:
        nev[0] += 1
        return f(x, y)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", _sciint.IntegrationWarning)
        value, err = _sciint.dblquad(
            wrapped,
            x0,
            x1,
            y_lo,
            y_hi,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
        )
    result = QuadResult(value, err, nev[0])
    if any(issubclass(w.category, _sciint.IntegrationWarning) for w in caught):
        if err > max(spec.abs_tol, spec.rel_tol * abs(value)) * 10:
            raise QuadratureError(
                f"2d integration did not converge (value={value}, error={err})",
                partial=result,
            )
    return result
