"""Newton potentials: convolution of interior sources with the 2-D kernel.

Sources are analytic Gaussian bumps kept strictly away from the boundary, so
boundary traces never see a singular kernel; only the self-cell of a volume
target needs the closed-form logarithmic correction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, SupportTooWide
from .geometry import BoundaryMesh, DomainSpec, InteriorGrid, contains, distance_to_boundary
from .jsonio import canonical_dumps
from .kernels import SpectralParameter, _radial, log_remainder_at_zero

TWO_PI = 2.0 * math.pi
_FIELD_FLOOR = 1e-12


@dataclass(frozen=True)
class SourceField:
    """Sum of Gaussian bumps amplitude * exp(-|x-c|^2 / (2 width^2))."""

    components: tuple  # ((center(2,), width, amplitude), ...)

    @classmethod
    def gaussian(cls, center, width: float, amplitude: float = 1.0) -> "SourceField":
        if width <= 0:
            raise ValueError("width must be positive")
        return cls(components=((tuple(map(float, center)), float(width), float(amplitude)),))

    @classmethod
    def sum_of(cls, *fields: "SourceField") -> "SourceField":
        comps = tuple(c for f in fields for c in f.components)
        return cls(components=comps)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(pts))
        for (cx, cy), width, amp in self.components:
            d2 = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2
            out += amp * np.exp(-d2 / (2 * width**2))
        return out

    @property
    def total_mass(self) -> float:
        return sum(amp * TWO_PI * w**2 for _, w, amp in self.components)

    @property
    def max_width(self) -> float:
        return max(w for _, w, _ in self.components)

    def cutoff_radius(self, width: float, amplitude: float) -> float:
        level = max(abs(amplitude), _FIELD_FLOOR) / _FIELD_FLOOR
        return width * math.sqrt(2.0 * math.log(level))

    def support_margin(self, spec: DomainSpec) -> float:
        """Distance from the boundary beyond which the field is below 1e-12."""
        margin = math.inf
        for center, width, amp in self.components:
            if not contains(spec, center):
                raise SupportTooWide(f"source center {center} lies outside the domain")
            d = float(distance_to_boundary(spec, np.array([center]))[0])
            margin = min(margin, d - self.cutoff_radius(width, amp))
        return margin

    def to_json(self) -> str:
        if len(self.components) == 1:
            (c, w, a) = self.components[0]
            doc = {"kind": "gaussian", "center": list(c), "width": w, "amplitude": a}
        else:
            doc = {
                "kind": "sum",
                "terms": [
                    {"center": list(c), "width": w, "amplitude": a}
                    for c, w, a in self.components
                ],
            }
        return canonical_dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SourceField":
        doc = json.loads(text)
        if doc["kind"] == "gaussian":
            return cls.gaussian(doc["center"], doc["width"], doc.get("amplitude", 1.0))
        if doc["kind"] == "sum":
            return cls.sum_of(
                *(
                    cls.gaussian(t["center"], t["width"], t.get("amplitude", 1.0))
                    for t in doc["terms"]
                )
            )
        raise ValueError(f"unknown source kind {doc['kind']!r}")


def _active_cells(grid: InteriorGrid, f: SourceField):
    vals = f(grid.points)
    peak = np.abs(vals).max()
    if peak == 0:
        return grid.points[:0], vals[:0]
    keep = np.abs(vals) > 1e-15 * peak
    return grid.points[keep], vals[keep]


def _require_resolution(grid: InteriorGrid, f: SourceField) -> None:
    if grid.h > f.max_width / 8.0 + 1e-15:
        raise GridTooCoarse(
            f"grid h={grid.h} does not resolve width {f.max_width} (need >= 8 cells)"
        )


def self_cell_integral(h: float, z) -> complex:
    """Integral of the kernel over an equal-area disk centered on the target.

    Logarithmic part in closed form, (h^2/4pi)(1 - 2 ln(h/sqrt(pi))), plus the
    smooth remainder at zero separation times the cell area.
    """
    log_part = h * h / (4 * math.pi) * (1.0 - 2.0 * math.log(h / math.sqrt(math.pi)))
    return log_part + log_remainder_at_zero(z) * h * h


def newton_potential(grid: InteriorGrid, f: SourceField, z, targets) -> np.ndarray:
    """Volume potential sum_c E(z; t - y_c) f(y_c) h^2 with self-cell correction."""
    _require_resolution(grid, f)
    sp = SpectralParameter.of(z)
    cells, fv = _active_cells(grid, f)
    pts = np.atleast_2d(np.asarray(targets, dtype=float))
    out = np.zeros(len(pts), dtype=complex)
    if len(cells) == 0:
        return out
    h = grid.h
    corr = self_cell_integral(h, sp)
    chunk = max(1, int(4e6) // max(1, len(cells)))
    for lo in range(0, len(pts), chunk):
        block = pts[lo : lo + chunk]
        diff = block[:, None, :] - cells[None, :, :]
        r = np.hypot(diff[..., 0], diff[..., 1])
        nearest = np.argmin(r, axis=1)
        rows = np.arange(len(block))
        near_r = r[rows, nearest]
        r[rows, nearest] = 1.0
        kern = _radial(2, sp, r)
        kern[rows, nearest] = 0.0
        vals = kern @ (fv * h * h)
        # targets inside an occupied cell get the closed-form self term
        in_cell = near_r <= h / math.sqrt(2.0) + 1e-12
        vals = vals + np.where(in_cell, corr * fv[nearest], _radial(2, sp, np.maximum(near_r, 1e-300)) * fv[nearest] * h * h)
        out[lo : lo + chunk] = vals
    return out


def newton_boundary_traces(grid: InteriorGrid, f: SourceField, z, mesh: BoundaryMesh):
    """Dirichlet and Neumann traces of the Newton potential on the mesh.

    The source must stay clear of the boundary by at least two panel lengths
    so the kernel is smooth and no singular handling is needed.
    """
    margin = f.support_margin(mesh.spec)
    if margin < 2.0 * mesh.max_panel_length:
        raise SupportTooWide(
            f"support margin {margin:.3g} < two panel lengths "
            f"{2 * mesh.max_panel_length:.3g}"
        )
    sp = SpectralParameter.of(z)
    cells, fv = _active_cells(grid, f)
    n = mesh.size
    gamma_d = np.zeros(n, dtype=complex)
    gamma_n = np.zeros(n, dtype=complex)
    if len(cells) == 0:
        return gamma_d, gamma_n
    h2 = grid.h**2
    chunk = max(1, int(4e6) // max(1, len(cells)))
    for lo in range(0, n, chunk):
        nodes = mesh.nodes[lo : lo + chunk]
        normals = mesh.normals[lo : lo + chunk]
        diff = nodes[:, None, :] - cells[None, :, :]
        r = np.hypot(diff[..., 0], diff[..., 1])
        gamma_d[lo : lo + chunk] = _radial(2, sp, r) @ (fv * h2)
        if sp.is_zero:
            radial_dr = -1.0 / (TWO_PI * r)
        else:
            radial_dr = -TWO_PI * r * _radial(4, sp, r)
        proj = np.einsum("ik,ijk->ij", normals, diff) / r
        gamma_n[lo : lo + chunk] = (radial_dr * proj) @ (fv * h2)
    return gamma_d, gamma_n
