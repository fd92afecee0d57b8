"""Robin-to-Dirichlet and Dirichlet-to-Robin maps and their identities.

Both maps are dense operators on boundary node values.  All adjoints and
norms are taken in the weighted (arclength) inner product; plain transposes
appear nowhere.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .boundary_ops import (
    DenseOperator,
    RobinCoupling,
    assemble_single_layer,
    density_values,
    operator_w_norm,
    robin_boundary_operator,
    w_inner,
    w_norm,
    weighted_adjoint_matrix,
)
from .bvp import _guarded_solve, solve_robin
from .errors import TargetTooCloseWarning, ZeroData
from .geometry import BoundaryMesh, InteriorGrid


@dataclass(frozen=True)
class SteklovMap:
    """Boundary solution map at spectral parameter z: rtd or dtr direction."""

    mesh: BoundaryMesh
    matrix: np.ndarray
    z: complex
    coupling: RobinCoupling
    direction: str

    def apply(self, g) -> np.ndarray:
        return self.matrix @ density_values(self.mesh, g)

    def as_operator(self) -> DenseOperator:
        return DenseOperator(self.mesh, self.matrix)

    def w_norm(self) -> float:
        return operator_w_norm(self.matrix, self.mesh.weights)


def assemble_rtd(mesh: BoundaryMesh, z, coupling: RobinCoupling) -> SteklovMap:
    """Robin-to-Dirichlet map: Robin datum g to the Dirichlet trace of u.

    Columns are gamma_D u for unit Robin data, realized as
    (gamma_D S_z) A^-1 with A the Robin boundary operator.
    """
    a = robin_boundary_operator(mesh, z, coupling)
    s = assemble_single_layer(mesh, z)
    inv = _guarded_solve(a.matrix, np.eye(mesh.size, dtype=complex), z)
    return SteklovMap(
        mesh=mesh, matrix=s.matrix @ inv, z=complex(z), coupling=coupling, direction="rtd"
    )


def assemble_dtr(mesh: BoundaryMesh, z, coupling: RobinCoupling) -> SteklovMap:
    """Dirichlet-to-Robin map: f to -(gamma_N + Theta gamma_D) of the
    Dirichlet extension, i.e. -(1/2 I + K#_z + Theta gamma_D S_z)(gamma_D S_z)^-1."""
    a = robin_boundary_operator(mesh, z, coupling)
    s = assemble_single_layer(mesh, z)
    s_inv = _guarded_solve(s.matrix, np.eye(mesh.size, dtype=complex), z)
    return SteklovMap(
        mesh=mesh, matrix=-(a.matrix @ s_inv), z=complex(z), coupling=coupling, direction="dtr"
    )


# ---------------------------------------------------------------------------
# Mode projectors
# ---------------------------------------------------------------------------


def low_mode_basis(mesh: BoundaryMesh, cutoff: int) -> np.ndarray:
    """W-orthonormal basis of the resolvable low-frequency data (2 cutoff + 1
    columns): Fourier modes |m| <= cutoff on the circle, otherwise the
    singular vectors of gamma_D S_0 with the largest singular values (the
    smoothest directions, matching the circle's low modes)."""
    w = mesh.weights
    if mesh.is_uniform_circle:
        cols = [np.exp(1j * m * mesh.node_angles) for m in range(-cutoff, cutoff + 1)]
        basis = np.stack(cols, axis=1)
    else:
        s = assemble_single_layer(mesh, 0.0).matrix
        sqw = np.sqrt(w)
        _, _, vh = np.linalg.svd(s * sqw[None, :] / sqw[:, None])
        basis = (vh.conj().T[:, : 2 * cutoff + 1]) / sqw[:, None]
    # W-orthonormalize: QR of sqrt(W) basis
    sqw = np.sqrt(w)
    q, _ = np.linalg.qr(basis * sqw[:, None])
    return q / sqw[:, None]


def low_mode_projector(mesh: BoundaryMesh, cutoff: int) -> np.ndarray:
    """W-orthogonal projector onto the span of low_mode_basis."""
    q = low_mode_basis(mesh, cutoff)
    return q @ (q.conj().T * mesh.weights[None, :])


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------


def check_inverse(mesh: BoundaryMesh, z, coupling: RobinCoupling, mode_cutoff: int | None = None) -> dict:
    """Residuals of the mutual-inversion identity M_dtr M_rtd = -I.

    Both products are reported in the weighted operator norm after projecting
    onto resolvable low modes (cutoff defaults to N/32).
    """
    if mode_cutoff is None:
        mode_cutoff = max(1, mesh.size // 32)
    rtd = assemble_rtd(mesh, z, coupling)
    dtr = assemble_dtr(mesh, z, coupling)
    proj = low_mode_projector(mesh, mode_cutoff)
    eye = np.eye(mesh.size)
    w = mesh.weights
    res_dr = operator_w_norm((dtr.matrix @ rtd.matrix + eye) @ proj, w)
    res_rd = operator_w_norm((rtd.matrix @ dtr.matrix + eye) @ proj, w)
    return {
        "dtr_rtd_plus_identity": res_dr,
        "rtd_dtr_plus_identity": res_rd,
        "mode_cutoff": mode_cutoff,
    }


def check_symmetry(mesh: BoundaryMesh, z, coupling: RobinCoupling) -> float:
    """||M_rtd(z)* - M_rtd(conj z)||_W / ||M_rtd(z)||_W with the W-adjoint."""
    m_z = assemble_rtd(mesh, z, coupling)
    m_conj = assemble_rtd(mesh, np.conj(complex(z)), coupling)
    gap = weighted_adjoint_matrix(m_z.matrix, mesh.weights) - m_conj.matrix
    return operator_w_norm(gap, mesh.weights) / m_z.w_norm()


def imaginary_part_min_eigenvalue(map_: SteklovMap) -> float:
    """Smallest eigenvalue of (M - M*)/(2i) in the weighted geometry."""
    sqw = np.sqrt(map_.mesh.weights)
    b = map_.matrix * sqw[:, None] / sqw[None, :]
    herm = (b - b.conj().T) / 2j
    return float(np.linalg.eigvalsh(herm).min())


def check_herglotz(mesh: BoundaryMesh, grid: InteriorGrid, z, coupling: RobinCoupling, g) -> dict:
    """Both sides of the upper-half-plane positivity identity.

    lhs: Im <g, M_rtd(z) g>_W from the map; rhs: Im(z) ||u||^2_{L2} with u the
    Robin solution for datum g integrated over the interior grid.  Also
    reports the minimum eigenvalue of the imaginary part of M_rtd(z).
    """
    zc = complex(z)
    if zc.imag <= 0:
        raise ValueError("the positivity identity lives in the open upper half-plane")
    vals = density_values(mesh, g)
    if w_norm(mesh, vals) == 0:
        raise ZeroData("need nonzero boundary data")
    m = assemble_rtd(mesh, zc, coupling)
    mg = m.matrix @ vals
    lhs = (w_inner(mesh, vals, mg) - w_inner(mesh, mg, vals)).imag / 2.0
    sol = solve_robin(mesh, zc, coupling, vals)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TargetTooCloseWarning)
        u = sol.evaluate(grid.points)
    rhs = zc.imag * float(np.sum(np.abs(u) ** 2 * grid.cell_weights))
    gap = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
    return {
        "lhs": float(lhs),
        "rhs": float(rhs),
        "relative_gap": float(gap),
        "imag_part_min_eigenvalue": imaginary_part_min_eigenvalue(m),
        "map_norm": m.w_norm(),
    }


def singular_value_decay(map_: SteklovMap, count: int | None = None) -> np.ndarray:
    """Weighted singular values of the map, largest first."""
    sqw = np.sqrt(map_.mesh.weights)
    b = map_.matrix * sqw[:, None] / sqw[None, :]
    s = np.linalg.svd(b, compute_uv=False)
    return s[: count if count is not None else len(s)]
