"""Network parameter space, scenario presets, and shared derived quantities.

All quantities live in consistent (unit-free) units: densities are points per
unit area, lengths share one unit, and the SIR threshold ``gamma`` is stored
linear.  dB conversion happens at the CLI boundary only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace


class ConfigError(ValueError):
    """Invalid scenario or run configuration."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def sinc(x: float) -> float:
    """Normalized sinc, sin(pi x)/(pi x), with sinc(0) = 1 by continuity.

    This is the convention that makes the closed-form PPP Laplace transform
    agree with its Gamma-function evaluation; see ``laplace_ppp`` in
    :mod:`holefield.bounds`.
    """
    if x == 0.0:
        return 1.0
    return math.sin(math.pi * x) / (math.pi * x)


@dataclass(frozen=True)
class NetworkParams:
    """Full parameter tuple defining one network scenario.

    lambda1: density of hole centers (>= 0)
    lambda2: density of the baseline process (> 0)
    D:       hole radius (>= 0)
    alpha:   path-loss exponent (> 2, required for interference convergence)
    P:       transmit power (> 0)
    r0:      serving-link distance (> 0)
    gamma:   SIR threshold, linear (> 0)
    """

    lambda1: float
    lambda2: float
    D: float
    alpha: float
    P: float = 1.0
    r0: float = 0.1
    gamma: float = 10.0

    def __post_init__(self) -> None:
        for name in ("lambda1", "lambda2", "D", "alpha", "P", "r0", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"{name} must be finite, got {v!r}")
        if self.lambda1 < 0:
            raise ConfigError("lambda1 must be >= 0")
        if self.lambda2 <= 0:
            raise ConfigError("lambda2 must be > 0")
        if self.D < 0:
            raise ConfigError("D must be >= 0")
        if self.alpha <= 2:
            raise ConfigError("alpha must be > 2 for the interference integral to converge")
        if self.P <= 0 or self.r0 <= 0 or self.gamma <= 0:
            raise ConfigError("P, r0 and gamma must be > 0")
        if self.lambda2 <= self.lambda1:
            # The model assumes a sparse hole process relative to the baseline;
            # degenerate combinations are still allowed for limit tests.
            warnings.warn(
                "lambda2 <= lambda1: hole process denser than baseline process",
                stacklevel=2,
            )

    def with_(self, **kwargs) -> "NetworkParams":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "D": self.D,
            "alpha": self.alpha,
            "P": self.P,
            "r0": self.r0,
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkParams":
        return cls(**d)


@dataclass(frozen=True)
class LaplaceArgument:
    """Argument of the interference Laplace transform.

    ``s`` has units such that s * P * r**-alpha is dimensionless.  When
    ``derived_from_coverage`` is set, s = gamma * r0**alpha / P and evaluating
    any transform estimator at this argument yields the coverage probability.
    """

    s: float
    derived_from_coverage: bool = False

    def __post_init__(self) -> None:
        if not (self.s >= 0.0 and math.isfinite(self.s)):
            raise ConfigError(f"Laplace argument s must be finite and >= 0, got {self.s!r}")


def coverage_argument(params: NetworkParams) -> LaplaceArgument:
    """s = gamma * r0**alpha / P, the argument at which the Laplace transform
    of interference equals the SIR coverage probability under unit-mean
    exponential fading."""
    return LaplaceArgument(
        s=params.gamma * params.r0**params.alpha / params.P,
        derived_from_coverage=True,
    )


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    params: NetworkParams = field(repr=False)


# The four canonical configurations: low/high density of holes x small/large
# holes.  Everything not listed here uses the common defaults
# (lambda2=1, alpha=4, P=1, r0=0.1, gamma=10 dB).
_PRESETS: dict[str, dict] = {
    "LD-SH": {"lambda1": 0.05, "D": 0.6},
    "HD-SH": {"lambda1": 0.2, "D": 0.6},
    "LD-LH": {"lambda1": 0.05, "D": 1.5},
    "HD-LH": {"lambda1": 0.2, "D": 1.5},
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str, **overrides) -> ScenarioPreset:
    """Look up one of the four canonical scenario presets by name.

    Keyword overrides replace individual parameter fields.
    """
    try:
        base = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; expected one of {', '.join(_PRESETS)}"
        ) from None
    fields = {
        "lambda2": 1.0,
        "alpha": 4.0,
        "P": 1.0,
        "r0": 0.1,
        "gamma": db_to_linear(10.0),
        **base,
        **overrides,
    }
    return ScenarioPreset(name=name, params=NetworkParams(**fields))
