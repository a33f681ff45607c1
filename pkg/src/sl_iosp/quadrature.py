"""Adaptive Gauss-Kronrod quadrature and the desingularized period kernels.

Every kernel handled here has the shape

    integral_0^1  t**w / sqrt((1 - t**2) * G(t)) dt,

with ``G`` one of ``1 + c*h``, ``1 - c*h`` or ``c*h - 1`` and
``h(t) = (1 - t**(2*p_star)) / (1 - t**2)``.  Substituting ``t = sin(theta)``
removes the inverse square root at ``t = 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DomainError, RadicandNonpositive, ToleranceNotMet

DEFAULT_TOL = 1e-12
MAX_PANELS = 10**6

# 15-point Kronrod abscissae (non-negative half) and weights, with the
# embedded 7-point Gauss weights on the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[[9, 11, 13]] = _WG[2::-1]


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_panels: int = MAX_PANELS,
) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute accuracy ``tol``.

    ``f`` must accept a 2-D array of abscissae and return values of the same
    shape.  Panels are bisected until each one's Kronrod/Gauss difference is
    below its share of ``tol`` (proportional to width), so the summed error
    estimate never exceeds ``tol``.

    Raises:
        ToleranceNotMet: the panel budget ran out or ``f`` returned a
            non-finite value.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    length = b - a
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    pieces: list[float] = []
    created = 1
    while lo.size:
        center = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = center[:, None] + half[:, None] * _NODES[None, :]
        fx = np.asarray(f(x), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise ToleranceNotMet("integrand returned a non-finite value")
        kron = half * (fx @ _KRONROD_W)
        gauss = half * (fx @ _GAUSS_W)
        err = np.abs(kron - gauss)
        width = hi - lo
        allowed = np.maximum(tol * width / length, 50.0 * np.finfo(float).eps * np.abs(kron))
        done = err <= allowed
        # Panels that can no longer be split in floating point are accepted
        # only if their error fits the remaining budget.
        tiny = width <= 8.0 * np.finfo(float).eps * np.maximum(np.abs(center), 1.0)
        if np.any(tiny & ~done):
            raise ToleranceNotMet("panel width reached machine resolution")
        pieces.extend(kron[done].tolist())
        lo, hi, center = lo[~done], hi[~done], center[~done]
        created += lo.size
        if created > max_panels:
            raise ToleranceNotMet(f"more than {max_panels} panels needed for tol={tol:g}")
        lo, hi = np.concatenate([lo, center]), np.concatenate([center, hi])
    return math.fsum(pieces)


def h_ratio(t, p_star: float):
    """``(1 - t**(2 p*)) / (1 - t**2)`` with the removable point ``t = 1`` filled by ``p*``."""
    t = np.asarray(t, dtype=float)
    return _h_from_cos2(1.0 - t * t, t * t, p_star)


def _h_from_cos2(one_minus_s, s, p_star: float):
    # s = t**2.  Integer p* has the exact polynomial form 1 + s + ... + s**(p*-1).
    if float(p_star).is_integer():
        n = int(p_star)
        out = np.ones_like(s)
        for _ in range(n - 1):
            out = out * s + 1.0
        return out
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.expm1(p_star * np.log1p(-one_minus_s)) / one_minus_s
    out = np.where(one_minus_s == 0.0, p_star, out)
    return np.where(s == 0.0, 1.0, out)


class SignMode(str, enum.Enum):
    ONE_PLUS_C_H = "OnePlusC_h"
    ONE_MINUS_C_H = "OneMinusC_h"
    C_H_MINUS_ONE = "C_hMinusOne"


@dataclass(frozen=True)
class KernelSpec:
    weight_power: float
    c: float
    sign_mode: SignMode
    p_star: float


def _check_kernel(k: KernelSpec) -> None:
    if not k.p_star > 1.0:
        raise DomainError(f"p_star must exceed 1, got {k.p_star}")
    if k.weight_power < 0:
        raise DomainError("weight_power must be nonnegative")
    if not (k.c > 0 and math.isfinite(k.c)):
        raise DomainError(f"coupling c must be positive and finite, got {k.c}")
    # 1 - c*h vanishes at t = 1 once c*p* reaches 1; c*h - 1 vanishes at t = 0 once c reaches 1.
    if k.sign_mode is SignMode.ONE_MINUS_C_H and k.c * k.p_star >= 1.0:
        raise RadicandNonpositive(f"1 - c*h(1) <= 0 for c={k.c}, p*={k.p_star}")
    if k.sign_mode is SignMode.C_H_MINUS_ONE and k.c <= 1.0:
        raise RadicandNonpositive(f"c*h(0) - 1 <= 0 for c={k.c}")


def _pstar_minus_h(u, s, p_star: float):
    # p* - h(t) with full relative accuracy as t -> 1 (u = cos^2 -> 0).
    if float(p_star).is_integer():
        # sum_{j=1}^{p*-1} (1 - s**j), each term u * (1 + s + ... + s**(j-1))
        out = np.zeros_like(s)
        partial = np.zeros_like(s)
        power = np.ones_like(s)
        for _ in range(int(p_star) - 1):
            partial = partial + power
            power = power * s
            out = out + partial
        return u * out
    # sum_{j>=2} binom(p*, j) (-1)**j u**(j-1) below the crossover, direct above
    small = u < 0.25
    us = np.where(small, u, 0.0)
    coef = -p_star
    term_sum = np.zeros_like(u)
    power = np.ones_like(u)
    for j in range(2, 60):
        coef *= -(p_star - j + 1) / j
        power = power * us
        term_sum = term_sum + coef * power
    direct = p_star - _h_from_cos2(np.where(small, 1.0, u), np.where(small, 0.0, s), p_star)
    return np.where(small, term_sum, direct)


def _h_minus_one(u, s, p_star: float):
    # h(t) - 1 = (s - s**p*) / (1 - s), accurate as t -> 0 (s -> 0).
    if float(p_star).is_integer():
        out = np.zeros_like(s)
        for _ in range(int(p_star) - 1):
            out = (out + 1.0) * s
        return out
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -s * np.expm1((p_star - 1.0) * np.log1p(-u)) / u
    return np.where(u == 0.0, p_star - 1.0, out)


def _radicand(k: KernelSpec, u, s):
    # Written as (value at the critical endpoint) + c * (nonnegative increment)
    # so that G keeps its relative accuracy when a bracket edge is approached.
    if k.sign_mode is SignMode.ONE_PLUS_C_H:
        return 1.0 + k.c * _h_from_cos2(u, s, k.p_star)
    if k.sign_mode is SignMode.ONE_MINUS_C_H:
        return (1.0 - k.c * k.p_star) + k.c * _pstar_minus_h(u, s, k.p_star)
    return (k.c - 1.0) + k.c * _h_minus_one(u, s, k.p_star)


def kernel_integral(k: KernelSpec, tol: float = DEFAULT_TOL) -> float:
    """``integral_0^1 t**w / sqrt((1 - t**2) G(t)) dt`` after ``t = sin(theta)``."""
    _check_kernel(k)
    w = float(k.weight_power)

    def integrand(theta):
        sin = np.sin(theta)
        cos = np.cos(theta)
        g = _radicand(k, cos * cos, sin * sin)
        if np.any(g <= 0.0):
            raise RadicandNonpositive("radicand nonpositive at a quadrature node")
        out = 1.0 / np.sqrt(g)
        if w:
            out = out * sin**w
        return out

    return integrate_adaptive(integrand, 0.0, 0.5 * math.pi, tol)
