"""Bounded 2-D Lipschitz domains as panelized boundary meshes.

Disks, simple polygons with corner-graded panels, and star-like domains with
trigonometric-polynomial radius.  Midpoint (Nystrom) collocation throughout:
one node per panel, arclength weight equal to the panel chord length, exact
for polygon edges.  Meshes are immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyGrid, InvalidDomain

_STAR_CHECK_POINTS = 4096


@dataclass(frozen=True)
class DomainSpec:
    """Geometry description: disk(radius) | polygon(vertices) | star(coeffs).

    Star radius functions are rho(phi) = sum_k coeffs[k] cos(k phi) for
    k >= 0 plus coeffs[-k] sin(k phi) for negative keys; rho must stay
    positive, which keeps the domain star-like about the origin.
    """

    kind: str
    radius: float = 1.0
    vertices: tuple = ()
    panels: int = 0
    panels_per_edge: int = 0
    grading: float = 3.0
    coeffs: dict = field(default_factory=dict)

    @classmethod
    def disk(cls, radius: float, panels: int) -> "DomainSpec":
        if radius <= 0:
            raise InvalidDomain("disk radius must be positive")
        return cls(kind="disk", radius=float(radius), panels=int(panels))

    @classmethod
    def polygon(cls, vertices, panels_per_edge: int, grading: float = 3.0) -> "DomainSpec":
        verts = tuple(tuple(map(float, v)) for v in vertices)
        _validate_polygon(verts)
        return cls(
            kind="polygon",
            vertices=verts,
            panels_per_edge=int(panels_per_edge),
            grading=float(grading),
        )

    @classmethod
    def star(cls, coeffs: dict, panels: int) -> "DomainSpec":
        cleaned = {int(k): float(v) for k, v in coeffs.items()}
        spec = cls(kind="star", coeffs=cleaned, panels=int(panels))
        rho = spec._star_radius(np.linspace(0, 2 * math.pi, _STAR_CHECK_POINTS, endpoint=False))
        if rho.min() <= 0:
            raise InvalidDomain(f"star radius reaches {rho.min():.3g} <= 0")
        return spec

    # -- radius function for star domains -----------------------------------
    def _star_radius(self, phi: np.ndarray, derivative: int = 0) -> np.ndarray:
        out = np.zeros_like(phi)
        for k, a in self.coeffs.items():
            if k >= 0:
                base = (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))[derivative]
                out += a * abs(k) ** derivative * base(k * phi) if k else (
                    a * (derivative == 0)
                )
            else:
                kk = -k
                base = (np.sin, np.cos, lambda t: -np.sin(t))[derivative]
                out += a * kk**derivative * base(kk * phi)
        return out

    # -- JSON interchange ----------------------------------------------------
    def to_json(self) -> str:
        if self.kind == "disk":
            doc = {"kind": "disk", "radius": self.radius, "panels": self.panels}
        elif self.kind == "polygon":
            doc = {
                "kind": "polygon",
                "vertices": [list(v) for v in self.vertices],
                "panels_per_edge": self.panels_per_edge,
                "grading": self.grading,
            }
        elif self.kind == "star":
            doc = {
                "kind": "star",
                "coeffs": {str(k): v for k, v in sorted(self.coeffs.items())},
                "panels": self.panels,
            }
        else:
            raise InvalidDomain(f"unknown kind {self.kind!r}")
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "DomainSpec":
        doc = json.loads(text)
        kind = doc.get("kind")
        if kind == "disk":
            return cls.disk(doc["radius"], doc["panels"])
        if kind == "polygon":
            return cls.polygon(
                doc["vertices"], doc["panels_per_edge"], doc.get("grading", 3.0)
            )
        if kind == "star":
            return cls.star(doc["coeffs"], doc["panels"])
        raise InvalidDomain(f"unknown domain kind {kind!r}")


def _validate_polygon(verts) -> None:
    if len(verts) < 3:
        raise InvalidDomain("polygon needs at least 3 vertices")
    v = np.asarray(verts)
    area2 = np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
    if area2 <= 0:
        raise InvalidDomain("polygon must be positively (counterclockwise) oriented")
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                raise InvalidDomain("polygon is self-intersecting")


def _segments_intersect(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return (o1 * o2 < 0) and (o3 * o4 < 0)


@dataclass(frozen=True)
class BoundaryMesh:
    """Panel-midpoint boundary discretization with outward normals."""

    spec: DomainSpec
    nodes: np.ndarray  # (N, 2) panel midpoints
    normals: np.ndarray  # (N, 2) unit outward
    weights: np.ndarray  # (N,) panel chord lengths
    curvatures: np.ndarray  # (N,) signed curvature, 0 on straight panels
    endpoints: np.ndarray  # (N, 2, 2) panel endpoints

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def perimeter(self) -> float:
        return float(self.weights.sum())

    @property
    def node_angles(self) -> np.ndarray:
        return np.arctan2(self.nodes[:, 1], self.nodes[:, 0])

    @property
    def is_uniform_circle(self) -> bool:
        return self.spec.kind == "disk"

    @property
    def max_panel_length(self) -> float:
        return float(self.weights.max())

    def same_mesh(self, other: "BoundaryMesh") -> bool:
        return self.nodes.shape == other.nodes.shape and np.array_equal(
            self.nodes, other.nodes
        )


def build_mesh(spec: DomainSpec) -> BoundaryMesh:
    """Panelize the boundary of the given domain."""
    if spec.kind == "disk":
        return _mesh_parametric(spec, spec.panels)
    if spec.kind == "star":
        return _mesh_parametric(spec, spec.panels)
    if spec.kind == "polygon":
        return _mesh_polygon(spec)
    raise InvalidDomain(f"unknown domain kind {spec.kind!r}")


def _boundary_point(spec: DomainSpec, t: np.ndarray) -> np.ndarray:
    if spec.kind == "disk":
        return spec.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)
    rho = spec._star_radius(t)
    return np.stack([rho * np.cos(t), rho * np.sin(t)], axis=-1)


def _mesh_parametric(spec: DomainSpec, n: int) -> BoundaryMesh:
    if n < 4:
        raise InvalidDomain("need at least 4 panels")
    t_edges = 2 * math.pi * np.arange(n + 1) / n
    t_mid = 0.5 * (t_edges[:-1] + t_edges[1:])
    ends = _boundary_point(spec, t_edges)
    nodes = _boundary_point(spec, t_mid)
    chords = ends[1:] - ends[:-1]
    weights = np.linalg.norm(chords, axis=1)
    # Outward normal from the rotated panel chord: over the closed loop the
    # weighted normals then telescope to exactly zero (divergence theorem on
    # constants holds discretely, not just to quadrature accuracy).
    normals = np.stack([chords[:, 1], -chords[:, 0]], axis=-1) / weights[:, None]

    if spec.kind == "disk":
        curv = np.full(n, 1.0 / spec.radius)
    else:
        rho = spec._star_radius(t_mid)
        drho = spec._star_radius(t_mid, derivative=1)
        ddrho = spec._star_radius(t_mid, derivative=2)
        speed = np.hypot(drho, rho)
        curv = (rho**2 + 2 * drho**2 - rho * ddrho) / speed**3

    endpoints = np.stack([ends[:-1], ends[1:]], axis=1)
    return BoundaryMesh(
        spec=spec,
        nodes=nodes,
        normals=normals,
        weights=weights,
        curvatures=curv,
        endpoints=endpoints,
    )


def _graded_breakpoints(k_panels: int, p: float) -> np.ndarray:
    # s(u) = u^p / (u^p + (1-u)^p): clusters like (k/K)^p at both edge ends.
    u = np.arange(k_panels + 1) / k_panels
    with np.errstate(invalid="ignore"):
        s = u**p / (u**p + (1 - u) ** p)
    s[0], s[-1] = 0.0, 1.0
    return s


def _mesh_polygon(spec: DomainSpec) -> BoundaryMesh:
    verts = np.asarray(spec.vertices)
    n_edges = len(verts)
    s = _graded_breakpoints(spec.panels_per_edge, spec.grading)
    nodes, normals, weights, ends = [], [], [], []
    for e in range(n_edges):
        a, b = verts[e], verts[(e + 1) % n_edges]
        d = b - a
        length = np.hypot(*d)
        outward = np.array([d[1], -d[0]]) / length
        pts = a[None, :] + s[:, None] * d[None, :]
        nodes.append(0.5 * (pts[:-1] + pts[1:]))
        weights.append((s[1:] - s[:-1]) * length)
        normals.append(np.tile(outward, (spec.panels_per_edge, 1)))
        ends.append(np.stack([pts[:-1], pts[1:]], axis=1))
    return BoundaryMesh(
        spec=spec,
        nodes=np.concatenate(nodes),
        normals=np.concatenate(normals),
        weights=np.concatenate(weights),
        curvatures=np.zeros(n_edges * spec.panels_per_edge),
        endpoints=np.concatenate(ends),
    )


# ---------------------------------------------------------------------------
# Point queries
# ---------------------------------------------------------------------------


def contains(spec: DomainSpec, x) -> bool:
    """Is x strictly inside the domain?"""
    pt = np.asarray(x, dtype=float)
    if spec.kind == "disk":
        return float(np.hypot(*pt)) < spec.radius
    if spec.kind == "star":
        phi = math.atan2(pt[1], pt[0])
        return float(np.hypot(*pt)) < float(spec._star_radius(np.array([phi]))[0])
    return _winding_contains(np.asarray(spec.vertices), pt)


def _winding_contains(verts: np.ndarray, pt: np.ndarray) -> bool:
    # even-odd ray crossing to the right of pt
    x, y = pt
    inside = False
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
            if x_cross > x:
                inside = not inside
    return inside


def distance_to_boundary(spec: DomainSpec, points: np.ndarray) -> np.ndarray:
    """Unsigned distance from each point to the boundary."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if spec.kind == "disk":
        return np.abs(spec.radius - np.hypot(pts[:, 0], pts[:, 1]))
    if spec.kind == "polygon":
        verts = np.asarray(spec.vertices)
        dmin = np.full(len(pts), np.inf)
        n = len(verts)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            d = b - a
            tt = np.clip(((pts - a) @ d) / (d @ d), 0.0, 1.0)
            proj = a[None, :] + tt[:, None] * d[None, :]
            dmin = np.minimum(dmin, np.hypot(*(pts - proj).T))
        return dmin
    # star: distance to a dense boundary sample
    phi = np.linspace(0, 2 * math.pi, _STAR_CHECK_POINTS, endpoint=False)
    bd = _boundary_point(spec, phi)
    from scipy.spatial import cKDTree

    return cKDTree(bd).query(pts)[0]


def domain_area(spec: DomainSpec) -> float:
    if spec.kind == "disk":
        return math.pi * spec.radius**2
    if spec.kind == "polygon":
        v = np.asarray(spec.vertices)
        return 0.5 * float(
            np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
        )
    phi = np.linspace(0, 2 * math.pi, _STAR_CHECK_POINTS, endpoint=False)
    rho = spec._star_radius(phi)
    return 0.5 * float(np.mean(rho**2)) * 2 * math.pi


@dataclass(frozen=True)
class InteriorGrid:
    """Uniform cell-centered grid covering the domain up to a safety margin."""

    spec: DomainSpec
    points: np.ndarray  # (M, 2) cell centers
    cell_weights: np.ndarray  # (M,) = h^2
    h: float
    margin: float

    @property
    def size(self) -> int:
        return len(self.points)

    def inner_product(self, f: np.ndarray, g: np.ndarray) -> complex:
        """L2(Omega) inner product of two grid fields, conjugate-linear in f."""
        return complex(np.sum(np.conj(f) * g * self.cell_weights))


def interior_grid(spec: DomainSpec, h: float, margin: float) -> InteriorGrid:
    """Cell centers inside the domain at boundary distance >= margin."""
    if h <= 0 or margin < 0:
        raise EmptyGrid("need h > 0 and margin >= 0")
    if spec.kind == "disk":
        lo, hi = -spec.radius, spec.radius
    elif spec.kind == "polygon":
        v = np.asarray(spec.vertices)
        lo, hi = v.min() - h, v.max() + h
    else:
        phi = np.linspace(0, 2 * math.pi, _STAR_CHECK_POINTS, endpoint=False)
        rmax = spec._star_radius(phi).max()
        lo, hi = -rmax, rmax
    nside = int(math.ceil((hi - lo) / h))
    coords = lo + (np.arange(nside) + 0.5) * h
    xx, yy = np.meshgrid(coords, coords, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel()], axis=-1)

    if spec.kind == "disk":
        keep = np.hypot(pts[:, 0], pts[:, 1]) <= spec.radius - margin
    else:
        inside = np.fromiter(
            (contains(spec, p) for p in pts), count=len(pts), dtype=bool
        )
        keep = inside.copy()
        if keep.any():
            keep[inside] = distance_to_boundary(spec, pts[inside]) >= margin
    if not keep.any():
        raise EmptyGrid(f"no interior points at h={h}, margin={margin}")
    pts = pts[keep]
    return InteriorGrid(
        spec=spec,
        points=pts,
        cell_weights=np.full(len(pts), h * h),
        h=float(h),
        margin=float(margin),
    )
