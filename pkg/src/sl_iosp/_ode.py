"""Compiled fixed-step RK4 loops used by reconstruct and forward."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _critical_rhs(u, gap, eps, power):
    # u'' = -gap u + eps |u|^(2p*-2) u, written as sign(u) |u|^(2p*-1)
    if u == 0.0:
        return -gap * u
    return -gap * u + eps * math.copysign(abs(u) ** power, u)


@njit(cache=True)
def integrate_critical(n, gap, eps, power, du0):
    """RK4 for the critical equation on [0, 1] with u(0)=0, u'(0)=du0."""
    h = 1.0 / n
    u = np.empty(n + 1)
    v = np.empty(n + 1)
    u[0] = 0.0
    v[0] = du0
    for i in range(n):
        u0 = u[i]
        v0 = v[i]
        k1u = v0
        k1v = _critical_rhs(u0, gap, eps, power)
        k2u = v0 + 0.5 * h * k1v
        k2v = _critical_rhs(u0 + 0.5 * h * k1u, gap, eps, power)
        k3u = v0 + 0.5 * h * k2v
        k3v = _critical_rhs(u0 + 0.5 * h * k2u, gap, eps, power)
        k4u = v0 + h * k3v
        k4v = _critical_rhs(u0 + h * k3u, gap, eps, power)
        u[i + 1] = u0 + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v[i + 1] = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return u, v


@njit(cache=True)
def _q_at(x, values, n):
    s = x * n
    j = int(s)
    if j >= n:
        j = n - 1
    elif j < 0:
        j = 0
    return values[j] + (s - j) * (values[j + 1] - values[j])


@njit(cache=True)
def _prufer_rhs(theta, lam_minus_q):
    c = math.cos(theta)
    s = math.sin(theta)
    return c * c + lam_minus_q * s * s


@njit(cache=True)
def prufer_theta(lam, values, steps):
    """theta(1) for theta' = cos^2 + (lam - q) sin^2, theta(0) = 0, q piecewise linear."""
    n = values.shape[0] - 1
    h = 1.0 / steps
    theta = 0.0
    for i in range(steps):
        x = i * h
        d0 = lam - _q_at(x, values, n)
        dm = lam - _q_at(x + 0.5 * h, values, n)
        d1 = lam - _q_at(x + h, values, n)
        k1 = _prufer_rhs(theta, d0)
        k2 = _prufer_rhs(theta + 0.5 * h * k1, dm)
        k3 = _prufer_rhs(theta + 0.5 * h * k2, dm)
        k4 = _prufer_rhs(theta + h * k3, d1)
        theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return theta
