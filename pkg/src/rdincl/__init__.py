"""Reaction-diffusion inclusion on (0, 1): solvers, attracting objects, checks.

The package simulates du/dt - u_xx in b(t)*sgn-set(u) + omega(t)*u with
homogeneous Dirichlet conditions, where the forcing takes values in the full
interval [-1, 1] wherever u vanishes.  It provides a monotone implicit
finite-difference solver with exact discrete positivity and comparison, an
independent sine-series reference solver, explicit selection policies for
the set-valued forcing, the attracting objects of the positive cone (rest
state, positive pullback state, delayed-ignition connections), and hull-level
evolution identities, all wired into a batch CLI (``rdincl``).
"""

__version__ = "0.1.0"

from . import attractor, coefficients, fdsolver, selections, skewflow, spectral
from .coefficients import HullSample, Symbol, constant, from_table, hull_sample, quasiperiodic
from .fdsolver import Grid, Trajectory, h1_norm, l2_norm, solve, step
from .selections import DelayedIgnition, Regularized, SignWithValue, parse_policy

__all__ = [
    "__version__",
    "attractor",
    "coefficients",
    "fdsolver",
    "selections",
    "skewflow",
    "spectral",
    "HullSample",
    "Symbol",
    "constant",
    "from_table",
    "hull_sample",
    "quasiperiodic",
    "Grid",
    "Trajectory",
    "h1_norm",
    "l2_norm",
    "solve",
    "step",
    "DelayedIgnition",
    "Regularized",
    "SignWithValue",
    "parse_policy",
]
