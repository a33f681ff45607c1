"""Complete elliptic integrals and Jacobi elliptic functions.

``e1`` and ``e2`` take the *parameter* ``s`` (the factor multiplying
``t**2``); ``jacobi`` takes the *modulus* ``k``.  The two are related by
``s = k**2``, so the quarter period of ``sn(., k)`` is ``e1(k**2)``.
"""

from __future__ import annotations

import math

import numpy as np

from .core import DomainError, NoConvergence
from .quadrature import DEFAULT_TOL, integrate_adaptive

AGM_RTOL = 1e-15
AGM_MAX_ITER = 40


def _agm(s: float) -> tuple[float, float]:
    """Return (K, E) at parameter s < 1 by the arithmetic-geometric mean.

    Valid for negative s too: b0 = sqrt(1 - s) > 1 and c0**2 = s.
    """
    a, b = 1.0, math.sqrt(1.0 - s)
    weighted = 0.5 * s  # sum of 2**(n-1) * c_n**2, n = 0 term
    power = 0.5
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_RTOL * a:
            k = math.pi / (2.0 * a)
            return k, k * (1.0 - weighted)
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        weighted += power * c * c
    raise NoConvergence(f"AGM did not converge for s={s}")


def _check_parameter(s: float) -> float:
    s = float(s)
    if not (s < 1.0) or math.isnan(s):
        raise DomainError(f"elliptic parameter must be < 1, got {s}")
    return s


def _delta2(theta, s: float):
    # 1 - s sin^2 written without cancellation near s = 1, theta = pi/2
    return np.cos(theta) ** 2 + (1.0 - s) * np.sin(theta) ** 2


def e1(s: float, method: str = "agm", tol: float = DEFAULT_TOL) -> float:
    """``integral_0^1 dt / sqrt((1 - t**2)(1 - s t**2))`` for ``s < 1``.

    ``method="quadrature"`` integrates the ``t = sin(theta)`` form
    adaptively instead of using the AGM; the two agree to ~1e-12.
    """
    s = _check_parameter(s)
    if method == "agm":
        return _agm(s)[0]
    if method == "quadrature":
        return integrate_adaptive(lambda th: 1.0 / np.sqrt(_delta2(th, s)), 0.0, 0.5 * math.pi, tol)
    raise ValueError(f"unknown method {method!r}")


def e2(s: float, method: str = "agm", tol: float = DEFAULT_TOL) -> float:
    """``integral_0^1 sqrt(1 - s t**2) / sqrt(1 - t**2) dt`` for ``s < 1``."""
    s = _check_parameter(s)
    if method == "agm":
        return _agm(s)[1]
    if method == "quadrature":
        return integrate_adaptive(lambda th: np.sqrt(_delta2(th, s)), 0.0, 0.5 * math.pi, tol)
    raise ValueError(f"unknown method {method!r}")


def jacobi(z, k: float):
    """Jacobi ``(sn, cn, dn)`` at argument ``z`` (scalar or array) and modulus ``0 <= k < 1``.

    Descending Landen transformation: run the AGM with ``c0 = k`` down to
    ``c_N ~ 0``, set ``phi_N = 2**N a_N z`` and recover the amplitude
    ``phi_0`` by ``phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n)) / 2``.
    """
    k = float(k)
    if not (0.0 <= k < 1.0):
        raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k}")
    z_arr = np.asarray(z, dtype=float)
    a_list = [1.0]
    c_list = [k]
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(AGM_MAX_ITER):
        # c_{n+1} = c_n**2 / (4 a_{n+1}); a residual one-ulp gap between a and b never shrinks.
        if abs(c_list[-1]) <= 2.0 * np.finfo(float).eps * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_list.append(a)
        c_list.append(c)
    else:
        raise NoConvergence(f"Landen descent did not converge for k={k}")
    n = len(a_list) - 1
    phi = (2.0**n) * a_list[n] * z_arr
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_list[i] / a_list[i] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn is positive for real arguments and k < 1.
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    if np.ndim(z) == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn
