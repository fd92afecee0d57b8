"""Boundary-integral solvers for 2-D Helmholtz boundary value problems.

Layer potentials on Lipschitz domains, Robin/Neumann/Dirichlet solvers,
Robin-to-Dirichlet maps, and resolvent-difference verification against
analytic disk oracles.
"""

from .kernels import (
    SpectralParameter,
    bessel_j,
    bessel_j_derivative,
    bessel_y,
    fundamental_gradient,
    fundamental_hessian,
    fundamental_solution,
    hankel1,
    sqrt_upper,
)

__all__ = [
    "SpectralParameter",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_y",
    "fundamental_gradient",
    "fundamental_hessian",
    "fundamental_solution",
    "hankel1",
    "sqrt_upper",
]

__version__ = "0.1.0"
