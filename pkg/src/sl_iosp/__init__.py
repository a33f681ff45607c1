"""Inverse optimization spectral problem for the Dirichlet Sturm-Liouville operator
with a constant prior potential."""

from .core import (
    AmplitudeSolution,
    IospError,
    ProblemSpec,
    Regime,
    RegimeClass,
    classify,
    validate,
)
from .critical import first_integral_residual, invert_v, u_kernel, v_kernel
from .forward import SampledPotential, eigenvalue, prufer_angle
from .reconstruct import PotentialProfile, lp_norm_direct, reconstruct_closed_form, solve_u_ode
from .spectral_error import dilation_residual, r_m, z_m

__all__ = [
    "AmplitudeSolution",
    "IospError",
    "PotentialProfile",
    "ProblemSpec",
    "Regime",
    "RegimeClass",
    "SampledPotential",
    "classify",
    "dilation_residual",
    "eigenvalue",
    "first_integral_residual",
    "invert_v",
    "lp_norm_direct",
    "prufer_angle",
    "r_m",
    "reconstruct_closed_form",
    "solve_u_ode",
    "u_kernel",
    "v_kernel",
    "validate",
    "z_m",
]
