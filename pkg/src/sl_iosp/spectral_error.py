"""Minimal reconstruction error as a function of the gap, and its dilation law."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ProblemSpec, Regime, RegimeClass, classify, validate
from .critical import _BRANCH_OF, invert_v, period_integrals_at_prior, u_integral_from_coupling
from .quadrature import DEFAULT_TOL

# Below this |gap| the inversion targets sqrt|gap|/(2m) degenerate; the
# closed-form value at gap = 0 is used instead.
AT_PRIOR_BAND = 1e-10


@dataclass(frozen=True)
class ErrorValue:
    x: float
    m: int
    p: float
    value: float
    branch: RegimeClass


def at_prior_error(m: int, p: float, tol: float = DEFAULT_TOL) -> float:
    """Error at gap 0: ``4 m^2 p* (I**(2p-1) J)**(1/p)``."""
    p_star = p / (p - 1.0)
    i_val, j_val = period_integrals_at_prior(p_star, tol)
    return 4.0 * m * m * p_star * (i_val ** (2.0 * p - 1.0) * j_val) ** (1.0 / p)


def at_prior_error_unrooted(m: int, p: float, tol: float = DEFAULT_TOL) -> float:
    """The gap-0 constant in the form ``(4m^2/p*)**p I**(2p-1) J``.

    Kept only as a diagnostic: it is not continuous with the neighbouring
    branches (see ``tests/test_spectral_error.py``).
    """
    p_star = p / (p - 1.0)
    i_val, j_val = period_integrals_at_prior(p_star, tol)
    return (4.0 * m * m / p_star) ** p * i_val ** (2.0 * p - 1.0) * j_val


def error_value(x: float, m: int, p: float, tol: float = DEFAULT_TOL) -> ErrorValue:
    spec = validate(ProblemSpec(0.0, float(x), m, float(p)))
    if abs(x) < AT_PRIOR_BAND and x != m * m * math.pi**2:
        branch = RegimeClass(Regime.AT_PRIOR, -1, float(x))
    else:
        branch = classify(spec)
    if branch.regime is Regime.RESONANT:
        return ErrorValue(x, m, p, 0.0, branch)
    if branch.regime is Regime.AT_PRIOR:
        return ErrorValue(x, m, p, at_prior_error(m, p, tol), branch)

    amp = invert_v(spec, tol)
    p_star = spec.p_star
    key, _ = _BRANCH_OF[branch.regime]
    # U(a) = a^{2p*} |x|^{-p} * integral = (c p*)^p * integral
    u_val = (amp.c * p_star) ** p * u_integral_from_coupling(key, amp.c, p_star, tol)
    power = 2.0 * m * abs(x) ** (p - 0.5) * u_val
    return ErrorValue(x, m, p, power ** (1.0 / p), branch)


def z_m(x: float, m: int, p: float, tol: float = DEFAULT_TOL) -> float:
    """``||q_hat - q0||_p`` for gap ``x = lambda_star - q0``."""
    return error_value(x, m, p, tol).value


def r_m(x: float, m: int) -> float:
    return x / (m * m)


def dilation_residual(x: float, m: int, p: float, tol: float = DEFAULT_TOL) -> float:
    """``Z_1(x/m^2) - Z_m(x)/m^2``, identically zero in exact arithmetic."""
    return z_m(r_m(x, m), 1, p, tol) - r_m(z_m(x, m, p, tol), m)
