"""Optimal potential q_hat and the critical-equation solution u on [0, 1].

Two independent routes:

* ``solve_u_ode`` shoots the critical equation from ``u(0)=0, u'(0)=sqrt(k)``
  with fixed-step RK4, for any (m, p);
* ``reconstruct_closed_form`` evaluates the Jacobi-elliptic solution, only
  available for p=2, m=1.

Both then set ``q_hat = q0 + eps |u|**(2p*-2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._ode import integrate_critical
from .core import (
    AmplitudeSolution,
    BoundaryMiss,
    ConservationViolated,
    DomainError,
    ProblemSpec,
    Regime,
    RegimeClass,
    UnsupportedExponent,
    classify,
)
from .critical import first_integral_residual, invert_v, period_integrals_at_prior
from .elliptic import e1, jacobi
from .quadrature import DEFAULT_TOL

DEFAULT_GRID = 8192
MIN_GRID = 256
CONSERVATION_RTOL = 1e-6
BOUNDARY_RTOL = 1e-6


@dataclass(frozen=True)
class PotentialProfile:
    n: int
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    q_hat: np.ndarray
    spec: ProblemSpec
    regime: RegimeClass
    amplitude: AmplitudeSolution | None
    method: str

    @property
    def max_abs_u(self) -> float:
        return float(np.max(np.abs(self.u)))

    def conservation_residual(self) -> float:
        """Largest |first integral - k| along the profile (0 at resonance)."""
        if self.amplitude is None:
            return 0.0
        res = first_integral_residual(self.u, self.du, self.spec, self.amplitude.k)
        return float(np.max(np.abs(res)))


@dataclass(frozen=True)
class EllipticReconstruction:
    a1: float
    modulus: float
    omega: float
    branch: RegimeClass


def _grid(n: int) -> np.ndarray:
    if int(n) != n or n < MIN_GRID:
        raise DomainError(f"grid must have at least {MIN_GRID} intervals, got {n}")
    return np.arange(n + 1, dtype=float) / n


def potential_from_u(u: np.ndarray, spec: ProblemSpec, epsilon: int) -> np.ndarray:
    return spec.q0 + epsilon * np.abs(u) ** (2.0 * spec.p_star - 2.0)


def _resonant_profile(spec: ProblemSpec, regime: RegimeClass, x: np.ndarray, method: str) -> PotentialProfile:
    zeros = np.zeros_like(x)
    return PotentialProfile(x.size - 1, x, zeros, zeros.copy(), np.full_like(x, spec.q0), spec, regime, None, method)


def solve_u_ode(spec: ProblemSpec, n: int = DEFAULT_GRID, tol: float = DEFAULT_TOL,
                amplitude: AmplitudeSolution | None = None, sign: int = 1) -> PotentialProfile:
    """Integrate the critical equation on ``n`` RK4 steps and build ``q_hat``.

    ``sign=-1`` starts with a negative slope; ``q_hat`` is unchanged.
    """
    x = _grid(n)
    regime = classify(spec)
    if regime.regime is Regime.RESONANT:
        return _resonant_profile(spec, regime, x, "ode")
    amp = amplitude if amplitude is not None else invert_v(spec, tol)
    power = 2.0 * spec.p_star - 1.0
    u, du = integrate_critical(int(n), regime.gap, float(regime.epsilon), power, sign * math.sqrt(amp.k))
    profile = PotentialProfile(int(n), x, u, du, potential_from_u(u, spec, regime.epsilon),
                               spec, regime, amp, "ode")
    drift = profile.conservation_residual()
    if drift > CONSERVATION_RTOL * max(1.0, amp.k):
        raise ConservationViolated(f"first integral drifted by {drift:.3e} (k={amp.k:.6g})")
    scale = profile.max_abs_u
    if abs(u[-1]) > BOUNDARY_RTOL * scale:
        raise BoundaryMiss(f"|u(1)| = {abs(u[-1]):.3e} with max|u| = {scale:.6g}")
    return profile


def elliptic_parameters(spec: ProblemSpec, amp: AmplitudeSolution) -> EllipticReconstruction:
    """Modulus and frequency of the p=2, m=1 solution."""
    regime = classify(spec)
    gap = regime.gap
    a = amp.a_m
    if regime.regime is Regime.ABOVE:
        k1 = math.sqrt(a * a / (2.0 * gap - a * a))
        omega = math.sqrt(gap - 0.5 * a * a)
        return EllipticReconstruction(a, k1, omega, regime)
    if regime.regime is Regime.AT_PRIOR:
        return EllipticReconstruction(a, 1.0 / math.sqrt(2.0), a, regime)
    # cn branch: u = a cn(2K x - K; k) with K the quarter period of modulus k
    k = math.sqrt(a * a / (2.0 * gap + 2.0 * a * a))
    return EllipticReconstruction(a, k, 2.0 * e1(k * k), regime)


def reconstruct_closed_form(spec: ProblemSpec, n: int = DEFAULT_GRID, tol: float = DEFAULT_TOL) -> PotentialProfile:
    """Jacobi-elliptic solution for p=2, m=1."""
    if spec.p != 2 or spec.m != 1:
        raise UnsupportedExponent("closed form exists only for p=2, m=1")
    x = _grid(n)
    regime = classify(spec)
    if regime.regime is Regime.RESONANT:
        return _resonant_profile(spec, regime, x, "closed-form")

    if regime.regime is Regime.AT_PRIOR:
        i_val, _ = period_integrals_at_prior(2.0, tol)
        k4 = 2.0 * math.sqrt(2.0) * i_val
        amp = AmplitudeSolution(k4, 0.5 * k4**4, k4, k4, 0)
        params = EllipticReconstruction(k4, 1.0 / math.sqrt(2.0), k4, regime)
        sn, cn, dn = jacobi(k4 * x, params.modulus)
        u = k4 / math.sqrt(2.0) * sn / dn
        du = k4 * k4 / math.sqrt(2.0) * cn / (dn * dn)
    else:
        amp = invert_v(spec, tol)
        params = elliptic_parameters(spec, amp)
        a, w = params.a1, params.omega
        if regime.regime is Regime.ABOVE:
            sn, cn, dn = jacobi(w * x, params.modulus)
            u = a * sn
            du = a * w * cn * dn
        else:
            quarter = 0.5 * w
            sn, cn, dn = jacobi(w * x - quarter, params.modulus)
            u = a * cn
            du = -a * w * sn * dn
    return PotentialProfile(int(n), x, u, du, potential_from_u(u, spec, regime.epsilon),
                            spec, regime, amp, "closed-form")


def lp_norm_direct(profile: PotentialProfile) -> float:
    """``(int_0^1 |q_hat - q0|^p dx)^(1/p)`` by composite Simpson on the profile grid."""
    p = profile.spec.p
    f = np.abs(profile.q_hat - profile.spec.q0) ** p
    h = 1.0 / profile.n
    if profile.n % 2 == 0:
        integral = h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
    else:
        integral = h * (0.5 * (f[0] + f[-1]) + f[1:-1].sum())
    return float(integral) ** (1.0 / p)
