"""Forward Dirichlet eigensolver by Prufer shooting.

Independent of the reconstruction path: it only sees grid samples of a
potential and counts the phase of (u, u') through multiples of pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._ode import prufer_theta
from .core import BracketFailure, DomainError, NoConvergence

STEPS_PER_CELL = 4
EIG_TOL = 1e-10
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class SampledPotential:
    """Potential sampled on the uniform grid ``j/n``, linear in between."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 3:
            raise DomainError("need at least 3 samples (n >= 2)")
        if not np.all(np.isfinite(values)):
            raise DomainError("potential samples must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.size - 1

    @classmethod
    def constant(cls, c: float, n: int) -> SampledPotential:
        return cls(np.full(n + 1, float(c)))


def _steps(q: SampledPotential, steps: int | None) -> int:
    if steps is None:
        return STEPS_PER_CELL * q.n
    if steps < STEPS_PER_CELL * q.n:
        raise DomainError(f"steps must be >= {STEPS_PER_CELL} * n = {STEPS_PER_CELL * q.n}")
    return int(steps)


def prufer_angle(lam: float, q: SampledPotential, steps: int | None = None) -> float:
    return float(prufer_theta(float(lam), q.values, _steps(q, steps)))


def eigenvalue(q: SampledPotential, m: int, tol: float = EIG_TOL, steps: int | None = None) -> float:
    """The m-th Dirichlet eigenvalue, i.e. the root of ``theta(1; lam) = m pi``."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if tol <= 0:
        raise DomainError("tol must be positive")
    nsteps = _steps(q, steps)
    target = m * math.pi
    lo = float(q.values.min()) + (m - 1) ** 2 * math.pi**2 - 1.0
    hi = float(q.values.max()) + m**2 * math.pi**2 + 1.0
    theta_lo = prufer_theta(lo, q.values, nsteps)
    theta_hi = prufer_theta(hi, q.values, nsteps)
    if not (theta_lo < target < theta_hi):
        raise BracketFailure(f"theta(1) does not cross {m}*pi on [{lo}, {hi}]")
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if prufer_theta(mid, q.values, nsteps) < target:
            lo = mid
        else:
            hi = mid
    raise NoConvergence("eigenvalue bisection did not converge")
