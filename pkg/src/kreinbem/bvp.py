"""Dirichlet / Neumann / Robin boundary value solvers and interior resolvents.

Every solver represents its solution as a single layer potential u = S_z h
(plus a Newton-potential part for resolvents applied to interior sources)
and reduces the boundary condition to a dense second-kind integral equation,
solved by LU with partial pivoting.  Spectral parameters at which the
boundary operator loses invertibility surface as NearSingular, never as a
silent perturbation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from .boundary_ops import (
    RobinCoupling,
    assemble_single_layer,
    density_values,
    eval_single_layer,
    neumann_trace_single_layer,
    robin_boundary_operator,
    w_norm,
)
from .errors import NearSingular
from .geometry import BoundaryMesh, InteriorGrid
from .volume import SourceField, newton_boundary_traces, newton_potential

COND_LIMIT = 1e12


def _guarded_solve(matrix: np.ndarray, rhs: np.ndarray, z) -> np.ndarray:
    """LU solve that raises NearSingular when the 1-norm condition blows up."""
    lu, piv = lu_factor(matrix)
    (gecon,) = get_lapack_funcs(("gecon",), (matrix,))
    anorm = np.linalg.norm(matrix, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond <= 0 or 1.0 / rcond > COND_LIMIT:
        cond = np.inf if rcond <= 0 else 1.0 / rcond
        raise NearSingular(z, cond)
    return lu_solve((lu, piv), rhs)


def operator_condition(matrix: np.ndarray) -> float:
    """1-norm condition estimate of a dense operator matrix."""
    lu, _ = lu_factor(matrix)
    (gecon,) = get_lapack_funcs(("gecon",), (matrix,))
    rcond, _ = gecon(lu, np.linalg.norm(matrix, 1), norm="1")
    return np.inf if rcond <= 0 else 1.0 / rcond


@dataclass
class BVPSolution:
    """Solved field: layer density plus optional Newton-potential part."""

    mesh: BoundaryMesh
    z: complex
    density: np.ndarray
    problem: str
    coupling: RobinCoupling | None = None
    newton_part: tuple[InteriorGrid, SourceField] | None = None
    _newton_traces: tuple[np.ndarray, np.ndarray] | None = None

    def evaluate(self, targets) -> np.ndarray:
        """Field values at interior targets."""
        out = eval_single_layer(self.mesh, self.z, self.density, targets)
        if self.newton_part is not None:
            grid, f = self.newton_part
            out = out + newton_potential(grid, f, self.z, targets)
        return out

    def gamma_d(self) -> np.ndarray:
        """Dirichlet trace on the mesh."""
        out = assemble_single_layer(self.mesh, self.z).apply(self.density)
        if self._newton_traces is not None:
            out = out + self._newton_traces[0]
        return out

    def gamma_n(self) -> np.ndarray:
        """Neumann trace (interior, outward normal) on the mesh."""
        out = neumann_trace_single_layer(self.mesh, self.z, self.density, "interior")
        if self._newton_traces is not None:
            out = out + self._newton_traces[1]
        return out

    def boundary_residual(self, data: np.ndarray) -> float:
        """Relative weighted residual of the boundary condition against data."""
        if self.problem == "dirichlet":
            got = self.gamma_d()
        elif self.coupling is not None:
            got = self.gamma_n() + self.coupling.apply(self.gamma_d())
        else:
            got = self.gamma_n()
        scale = w_norm(self.mesh, data)
        if scale == 0:
            return float(w_norm(self.mesh, got))
        return float(w_norm(self.mesh, got - data) / scale)


def solve_dirichlet(mesh: BoundaryMesh, z, f) -> BVPSolution:
    """Helmholtz field with prescribed Dirichlet trace f."""
    rhs = density_values(mesh, f)
    s = assemble_single_layer(mesh, z)
    h = _guarded_solve(s.matrix, rhs, z)
    return BVPSolution(mesh=mesh, z=complex(z), density=h, problem="dirichlet")


def solve_robin(mesh: BoundaryMesh, z, coupling: RobinCoupling, g) -> BVPSolution:
    """Helmholtz field with Robin datum gamma_N u + Theta gamma_D u = g."""
    rhs = density_values(mesh, g)
    a = robin_boundary_operator(mesh, z, coupling)
    h = _guarded_solve(a.matrix, rhs, z)
    return BVPSolution(mesh=mesh, z=complex(z), density=h, problem="robin", coupling=coupling)


def solve_neumann(mesh: BoundaryMesh, z, g) -> BVPSolution:
    """Neumann problem: the zero-coupling Robin case."""
    return solve_robin(mesh, z, RobinCoupling.zero(mesh), g)


# ---------------------------------------------------------------------------
# Resolvents applied to interior sources
# ---------------------------------------------------------------------------


def dirichlet_resolvent_solution(
    mesh: BoundaryMesh, grid: InteriorGrid, z, f: SourceField
) -> BVPSolution:
    """(-Delta_D - z)^-1 f as Newton potential plus Dirichlet correction."""
    gd_v, gn_v = newton_boundary_traces(grid, f, z, mesh)
    sol = solve_dirichlet(mesh, z, -gd_v)
    sol.problem = "dirichlet_resolvent"
    sol.newton_part = (grid, f)
    sol._newton_traces = (gd_v, gn_v)
    return sol


def dirichlet_resolvent(mesh, grid, z, f: SourceField, targets) -> np.ndarray:
    return dirichlet_resolvent_solution(mesh, grid, z, f).evaluate(targets)


def robin_resolvent_solution(
    mesh: BoundaryMesh, grid: InteriorGrid, z, coupling: RobinCoupling, f: SourceField
) -> BVPSolution:
    """(-Delta_Theta - z)^-1 f via the Robin correction of the Newton part."""
    gd_v, gn_v = newton_boundary_traces(grid, f, z, mesh)
    sol = solve_robin(mesh, z, coupling, -(gn_v + coupling.apply(gd_v)))
    sol.problem = "robin_resolvent"
    sol.newton_part = (grid, f)
    sol._newton_traces = (gd_v, gn_v)
    return sol


def robin_resolvent(mesh, grid, z, coupling, f: SourceField, targets) -> np.ndarray:
    return robin_resolvent_solution(mesh, grid, z, coupling, f).evaluate(targets)


def neumann_trace_of_dirichlet_resolvent(
    mesh: BoundaryMesh, grid: InteriorGrid, z, f: SourceField
) -> np.ndarray:
    """gamma_N (-Delta_D - z)^-1 f on the mesh."""
    return dirichlet_resolvent_solution(mesh, grid, z, f).gamma_n()
