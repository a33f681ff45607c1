"""Period kernels V1..V3 / U1..U3, amplitude inversion and the first integral.

Every kernel is evaluated through its coupling coefficient

    c = alpha**(2 p* - 2) / (p* |gap|),

which is what actually enters the radicand.  Inversion is carried out in a
transformed coordinate for ``c`` (log, logit or log-shift depending on the
regime) so the blow-up ends of V2 and V3 stay well conditioned.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.optimize import brentq

from .core import (
    AmplitudeSolution,
    BracketFailure,
    DomainError,
    NoConvergence,
    ProblemSpec,
    Regime,
    classify,
    validate,
)
from .quadrature import DEFAULT_TOL, KernelSpec, SignMode, _h_from_cos2, integrate_adaptive, kernel_integral

ROOT_XTOL = 1e-13
ROOT_MAXITER = 200
_MAX_PROBES = 80


class Kernel(str, enum.Enum):
    V1 = "V1"
    V2 = "V2"
    V3 = "V3"
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"


_MODE = {
    "1": SignMode.ONE_PLUS_C_H,
    "2": SignMode.ONE_MINUS_C_H,
    "3": SignMode.C_H_MINUS_ONE,
}


def coupling(alpha: float, spec: ProblemSpec) -> float:
    p_star = spec.p_star
    return alpha ** (2.0 * p_star - 2.0) / (p_star * abs(spec.gap))


def alpha_from_coupling(c: float, spec: ProblemSpec) -> float:
    return (c * spec.p_star * abs(spec.gap)) ** ((spec.p - 1.0) / 2.0)


def alpha_domain(which: Kernel | str, spec: ProblemSpec) -> tuple[float, float]:
    """Open interval of admissible amplitudes for a kernel."""
    which = Kernel(which)
    gap = spec.gap
    branch = which.value[1]
    if branch == "1":
        if not gap > 0:
            raise DomainError(f"{which.value} needs lambda_star > q0")
        return 0.0, math.inf
    if branch == "2":
        if not gap > 0:
            raise DomainError(f"{which.value} needs lambda_star > q0")
        return 0.0, gap ** ((spec.p - 1.0) / 2.0)
    if not gap < 0:
        raise DomainError(f"{which.value} needs lambda_star < q0")
    return (spec.p_star * -gap) ** ((spec.p - 1.0) / 2.0), math.inf


def _check_alpha(which: Kernel, alpha: float, spec: ProblemSpec) -> None:
    lo, hi = alpha_domain(which, spec)
    if not (lo < alpha < hi):
        raise DomainError(f"alpha={alpha} outside ({lo}, {hi}) for {which.value}")


def v_from_coupling(branch: str, c: float, p_star: float, tol: float = DEFAULT_TOL) -> float:
    return kernel_integral(KernelSpec(0.0, c, _MODE[branch], p_star), tol)


def u_integral_from_coupling(branch: str, c: float, p_star: float, tol: float = DEFAULT_TOL) -> float:
    """The bare integral of a U kernel, without the ``alpha**(2p*) |gap|**-p`` prefactor."""
    return kernel_integral(KernelSpec(2.0 * p_star, c, _MODE[branch], p_star), tol)


def v_kernel(which: Kernel | str, alpha: float, spec: ProblemSpec, tol: float = DEFAULT_TOL) -> float:
    which = Kernel(which)
    if which.value[0] != "V":
        raise ValueError(f"{which.value} is not a V kernel")
    validate(spec)
    _check_alpha(which, alpha, spec)
    return v_from_coupling(which.value[1], coupling(alpha, spec), spec.p_star, tol)


def u_kernel(which: Kernel | str, alpha: float, spec: ProblemSpec, tol: float = DEFAULT_TOL) -> float:
    which = Kernel(which)
    if which.value[0] != "U":
        raise ValueError(f"{which.value} is not a U kernel")
    validate(spec)
    _check_alpha(which, alpha, spec)
    prefactor = alpha ** (2.0 * spec.p_star) * abs(spec.gap) ** (-spec.p)
    return prefactor * u_integral_from_coupling(which.value[1], coupling(alpha, spec), spec.p_star, tol)


# Coordinates for the coupling: each maps the whole real line onto the
# admissible c-interval of its branch.
def _c_interior(y: float, p_star: float) -> float:
    return math.exp(y)


def _c_above(y: float, p_star: float) -> float:
    # logistic map onto (0, 1/p*)
    if y >= 0:
        return 1.0 / (p_star * (1.0 + math.exp(-y)))
    e = math.exp(y)
    return e / (p_star * (1.0 + e))


def _c_below(y: float, p_star: float) -> float:
    return 1.0 + math.exp(y)


_BRANCH_OF = {
    Regime.INTERIOR: ("1", _c_interior),
    Regime.ABOVE: ("2", _c_above),
    Regime.BELOW: ("3", _c_below),
}


def period_integrals_at_prior(p_star: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``I = int dt/sqrt(1 - t**2p*)`` and ``J = int t**2p* dt/sqrt(1 - t**2p*)`` over [0, 1]."""

    def weight(theta):
        sin, cos = np.sin(theta), np.cos(theta)
        return 1.0 / np.sqrt(_h_from_cos2(cos * cos, sin * sin, p_star))

    i_val = integrate_adaptive(weight, 0.0, 0.5 * math.pi, tol)
    j_val = integrate_adaptive(lambda th: weight(th) * np.sin(th) ** (2.0 * p_star), 0.0, 0.5 * math.pi, tol)
    return i_val, j_val


def _bracket(f, start: float = 0.0, step: float = 2.0) -> tuple[float, float, float, float]:
    """Expand from ``start`` until ``f`` changes sign; f must be monotone."""
    lo = hi = start
    f_lo = f_hi = f(start)
    if f_lo == 0.0:
        return start, start, 0.0, 0.0
    # walk toward the side where the sign changes
    for _ in range(_MAX_PROBES):
        trial = hi + step
        f_trial = f(trial)
        if (f_trial > 0) != (f_hi > 0) or f_trial == 0.0:
            return hi, trial, f_hi, f_trial
        if abs(f_trial) > abs(f_hi):
            break
        hi, f_hi = trial, f_trial
    for _ in range(_MAX_PROBES):
        trial = lo - step
        f_trial = f(trial)
        if (f_trial > 0) != (f_lo > 0) or f_trial == 0.0:
            return trial, lo, f_trial, f_lo
        lo, f_lo = trial, f_trial
    raise BracketFailure("no sign change found for the period equation")


def invert_v(spec: ProblemSpec, tol: float = DEFAULT_TOL) -> AmplitudeSolution:
    """Solve the quarter-period equation ``V(a) = sqrt|gap| / (2m)`` for the amplitude."""
    regime = classify(spec)
    gap = regime.gap
    p_star = spec.p_star
    if regime.regime is Regime.RESONANT:
        raise DomainError("resonant gap: the optimal potential is q0 itself and has no amplitude")
    if regime.regime is Regime.AT_PRIOR:
        i_val, _ = period_integrals_at_prior(p_star, tol)
        a = (2.0 * spec.m * math.sqrt(p_star) * i_val) ** (spec.p - 1.0)
        return AmplitudeSolution(a, a ** (2.0 * p_star) / p_star, a, a, 0)

    branch, to_c = _BRANCH_OF[regime.regime]
    target = math.sqrt(abs(gap)) / (2.0 * spec.m)

    def residual(y: float) -> float:
        return v_from_coupling(branch, to_c(y, p_star), p_star, tol) - target

    y_lo, y_hi, f_lo, f_hi = _bracket(residual)
    if y_lo == y_hi:
        y, iterations = y_lo, 0
    else:
        try:
            y, info = brentq(residual, y_lo, y_hi, xtol=ROOT_XTOL, maxiter=ROOT_MAXITER, full_output=True)
        except RuntimeError as exc:
            raise NoConvergence(str(exc)) from exc
        iterations = info.iterations
    c = to_c(y, p_star)
    a = alpha_from_coupling(c, spec)
    a_ends = sorted(alpha_from_coupling(to_c(v, p_star), spec) for v in (y_lo, y_hi))
    # k = -eps a^{2p*}/p* + gap a^2, with a^{2p*}/p* = a^2 c |gap|
    k = a * a * (gap - regime.epsilon * c * abs(gap))
    return AmplitudeSolution(a, k, a_ends[0], a_ends[1], iterations, c)


def first_integral_residual(u, du, spec: ProblemSpec, k: float):
    """``du**2 - (eps/p*)|u|**2p* + gap u**2 - k``; zero along exact trajectories."""
    regime = classify(spec)
    if regime.regime is Regime.RESONANT:
        raise DomainError("the first integral is not defined at resonance")
    u = np.asarray(u, dtype=float)
    du = np.asarray(du, dtype=float)
    p_star = spec.p_star
    out = du * du - (regime.epsilon / p_star) * np.abs(u) ** (2.0 * p_star) + regime.gap * u * u - k
    return float(out) if out.ndim == 0 else out
