"""Shared domain types, input validation and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class IospError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(IospError, ValueError):
    pass


class InvalidExponent(InvalidInput):
    pass


class InvalidIndex(InvalidInput):
    pass


class NonFiniteInput(InvalidInput):
    pass


class DomainError(IospError, ValueError):
    pass


class UnsupportedExponent(InvalidInput):
    """Closed-form reconstruction was requested outside p=2, m=1."""


class NumericalError(IospError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class ToleranceNotMet(NumericalError):
    pass


class RadicandNonpositive(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class ConservationViolated(NumericalError):
    pass


class BoundaryMiss(NumericalError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    """One inverse problem instance: prior q0, target eigenvalue, index m, exponent p."""

    q0: float
    lambda_star: float
    m: int
    p: float

    @property
    def gap(self) -> float:
        return self.lambda_star - self.q0

    @property
    def p_star(self) -> float:
        return self.p / (self.p - 1.0)


class Regime(str, enum.Enum):
    ABOVE = "Above"
    RESONANT = "Resonant"
    INTERIOR = "Interior"
    AT_PRIOR = "AtPrior"
    BELOW = "Below"


@dataclass(frozen=True)
class RegimeClass:
    regime: Regime
    epsilon: int
    gap: float


@dataclass(frozen=True)
class AmplitudeSolution:
    """Amplitude of the critical-equation solution.

    ``c`` is the coupling coefficient of the kernel radicand at ``a_m``;
    every kernel evaluation at the amplitude uses it directly.
    """

    a_m: float
    k: float
    bracket_lo: float
    bracket_hi: float
    iterations: int
    c: float = math.nan


def validate(spec: ProblemSpec) -> ProblemSpec:
    for name in ("q0", "lambda_star", "p"):
        value = getattr(spec, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise NonFiniteInput(f"{name} must be a real number, got {value!r}")
    if not (math.isfinite(spec.q0) and math.isfinite(spec.lambda_star)):
        raise NonFiniteInput("q0 and lambda_star must be finite")
    if not math.isfinite(spec.p) or spec.p <= 1.0:
        raise InvalidExponent(f"p must be finite and > 1, got {spec.p}")
    if isinstance(spec.m, bool) or int(spec.m) != spec.m or spec.m < 1:
        raise InvalidIndex(f"m must be an integer >= 1, got {spec.m}")
    return spec


def classify(spec: ProblemSpec, atol: float = 0.0) -> RegimeClass:
    """Return the regime and the sign epsilon of the nonlinear term.

    Only the gap ``lambda_star - q0`` matters.  The two boundary regimes
    are detected with ``|gap - boundary| <= atol``; the default ``atol=0``
    makes the comparison exact.
    """
    validate(spec)
    gap = spec.gap
    resonance = spec.m**2 * math.pi**2
    if abs(gap - resonance) <= atol:
        return RegimeClass(Regime.RESONANT, 0, gap)
    if abs(gap) <= atol:
        return RegimeClass(Regime.AT_PRIOR, -1, gap)
    if gap > resonance:
        return RegimeClass(Regime.ABOVE, +1, gap)
    if gap > 0.0:
        return RegimeClass(Regime.INTERIOR, -1, gap)
    return RegimeClass(Regime.BELOW, -1, gap)
