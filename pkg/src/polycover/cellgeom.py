"""Closed-form geometry of the four space-filling sensing cells.

A placement strategy tiles space with congruent copies of one convex
polyhedron, scaled so that the circumradius (cell center to farthest
vertex) equals the sensing radius R.  Every point of a cell is then
within R of the node at its center, so a tiling gives full coverage.
With that normalization:

    strategy               edge length    volume           surface area
    cube                   2R/sqrt(3)     8R^3/(3 sqrt3)   8 R^2
    hexagonal prism        R sqrt(2/3)    2R^3             (2 sqrt3 + 4 sqrt2) R^2
    rhombic dodecahedron   sqrt(3) R/2    2R^3             6 sqrt(2) R^2
    truncated octahedron   2R/sqrt(10)    32R^3/(5 sqrt5)  (12/5)(1 + 2 sqrt3) R^2

The volumetric quotient, cell volume over circumsphere volume
(4/3 pi R^3), measures how much of the sensing ball a cell actually
uses; the node count needed for a region scales with its reciprocal.
The truncated octahedron wins with 0.68329, versus 0.36755 for the
cube, which is why it needs roughly half the nodes.

The hexagonal prism quotient assumes the height that maximizes it,
h = sqrt(2) a for hexagon side a (from a^2 + h^2/4 = 3h^2/4).

Cell meshes are produced in the orientation induced by the node
lattice of each strategy, so meshes of adjacent cells share their
face planes (and face vertices) exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)


class StrategyKind(Enum):
    """The four polyhedral placement strategies."""

    CUBE = "cube"
    HEXAGONAL_PRISM = "hp"
    RHOMBIC_DODECAHEDRON = "rd"
    TRUNCATED_OCTAHEDRON = "to"

    @classmethod
    def parse(cls, text: str) -> "StrategyKind":
        key = text.strip().lower().replace("_", "-")
        try:
            return _ALIASES[key]
        except KeyError:
            raise ValueError(
                f"unknown strategy {text!r} (expected one of: cube, hp, rd, to)"
            ) from None

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    StrategyKind.CUBE: "cube",
    StrategyKind.HEXAGONAL_PRISM: "hexagonal-prism",
    StrategyKind.RHOMBIC_DODECAHEDRON: "rhombic-dodecahedron",
    StrategyKind.TRUNCATED_OCTAHEDRON: "truncated-octahedron",
}

_ALIASES: dict[str, StrategyKind] = {}
for _kind in StrategyKind:
    _ALIASES[_kind.value] = _kind
    _ALIASES[_kind.label] = _kind
_ALIASES["hexagonal prism"] = StrategyKind.HEXAGONAL_PRISM
_ALIASES["prism"] = StrategyKind.HEXAGONAL_PRISM
_ALIASES["rhombic dodecahedron"] = StrategyKind.RHOMBIC_DODECAHEDRON
_ALIASES["truncated octahedron"] = StrategyKind.TRUNCATED_OCTAHEDRON


def _check_radius(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or r <= 0.0:
        raise ValueError(f"sensing radius must be a positive finite number, got {r!r}")
    return r


_VOLUMETRIC_QUOTIENT = {
    StrategyKind.CUBE: 2.0 / (_SQRT3 * math.pi),
    StrategyKind.HEXAGONAL_PRISM: 3.0 / (2.0 * math.pi),
    StrategyKind.RHOMBIC_DODECAHEDRON: 3.0 / (2.0 * math.pi),
    StrategyKind.TRUNCATED_OCTAHEDRON: 24.0 / (5.0 * _SQRT5 * math.pi),
}


def volumetric_quotient(kind: StrategyKind) -> float:
    """Cell volume divided by the volume of its circumsphere.

    Dimensionless, independent of R; higher is better (fewer nodes).
    """
    return _VOLUMETRIC_QUOTIENT[kind]


def node_count_ratio(kind_a: StrategyKind, kind_b: StrategyKind) -> float:
    """Factor by which kind_a needs more nodes than kind_b for the same region.

    Node density is inversely proportional to the volumetric quotient, so
    this is quotient(kind_b) / quotient(kind_a).
    """
    return volumetric_quotient(kind_b) / volumetric_quotient(kind_a)


def hexagon_quotient_2d() -> float:
    """Area quotient of the regular hexagon against its circumcircle, 3 sqrt(3)/(2 pi).

    The 2D analogue of the volumetric quotient; the best truncated-octahedron
    quotient reaches about 82.6% of it.
    """
    return 3.0 * _SQRT3 / (2.0 * math.pi)


def hexagonal_prism_quotient(height_to_side: float) -> float:
    """Volumetric quotient of a hexagonal prism with height = height_to_side * a.

    The prism is scaled so its circumradius sqrt(a^2 + h^2/4) equals the
    sensing radius.  Maximized at height_to_side = sqrt(2), where it equals
    3/(2 pi); any other ratio wastes circumsphere volume.
    """
    rho = float(height_to_side)
    if not math.isfinite(rho) or rho <= 0.0:
        raise ValueError("height-to-side ratio must be positive")
    return (1.5 * _SQRT3 * rho) / ((4.0 / 3.0) * math.pi * (1.0 + rho * rho / 4.0) ** 1.5)


@dataclass(frozen=True)
class CellGeometry:
    """Closed-form measurements of one sensing cell at a given radius."""

    kind: StrategyKind
    edge_length: float
    circumradius: float
    volume: float
    surface_area: float


def cell_geometry(kind: StrategyKind, r: float) -> CellGeometry:
    """Edge length, volume, and surface area of the cell with circumradius r.

    For the rhombic dodecahedron edge_length is the rhombus edge
    sqrt(3) r / 2 (the generator cube has side r).
    """
    r = _check_radius(r)
    if kind is StrategyKind.CUBE:
        a = 2.0 * r / _SQRT3
        return CellGeometry(kind, a, r, a**3, 6.0 * a * a)
    if kind is StrategyKind.HEXAGONAL_PRISM:
        a = r * math.sqrt(2.0 / 3.0)
        h = a * _SQRT2
        volume = 1.5 * _SQRT3 * a * a * h
        surface = 3.0 * _SQRT3 * a * a + 6.0 * a * h
        return CellGeometry(kind, a, r, volume, surface)
    if kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        edge = _SQRT3 * r / 2.0
        return CellGeometry(kind, edge, r, 2.0 * r**3, 6.0 * _SQRT2 * r * r)
    a = 2.0 * r / math.sqrt(10.0)
    volume = 8.0 * _SQRT2 * a**3
    surface = (6.0 + 12.0 * _SQRT3) * a * a
    return CellGeometry(kind, a, r, volume, surface)


def isoperimetric_quotient(kind: StrategyKind) -> float:
    """Sphericity measure 36 pi V^2 / S^3; 1 for a sphere, pi/6 for a cube."""
    g = cell_geometry(kind, 1.0)
    return 36.0 * math.pi * g.volume**2 / g.surface_area**3


# ---------------------------------------------------------------------------
# Meshes

@dataclass(frozen=True)
class CellMesh:
    """Polygonal boundary mesh of one cell.

    vertices: (V, 3) float array.  faces: tuples of vertex indices, wound
    counter-clockwise seen from outside.
    """

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        self.vertices.setflags(write=False)

    def volume(self) -> float:
        """Signed volume from the divergence theorem; positive for outward winding."""
        total = 0.0
        v = self.vertices
        for face in self.faces:
            v0 = v[face[0]]
            for ia, ib in zip(face[1:-1], face[2:]):
                total += float(np.dot(v0, np.cross(v[ia], v[ib])))
        return total / 6.0

    def area(self) -> float:
        total = 0.0
        v = self.vertices
        for face in self.faces:
            v0 = v[face[0]]
            for ia, ib in zip(face[1:-1], face[2:]):
                total += float(np.linalg.norm(np.cross(v[ia] - v0, v[ib] - v0)))
        return total / 2.0

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def max_vertex_distance(self) -> float:
        rel = self.vertices - self.centroid()
        return float(np.sqrt((rel * rel).sum(axis=1)).max())


def _hexagon_xy(radius: float) -> list[tuple[float, float]]:
    h = _SQRT3 / 2.0
    return [
        (radius, 0.0),
        (0.5 * radius, h * radius),
        (-0.5 * radius, h * radius),
        (-radius, 0.0),
        (-0.5 * radius, -h * radius),
        (0.5 * radius, -h * radius),
    ]


def _unit_vertices(kind: StrategyKind) -> np.ndarray:
    """Vertex table for circumradius 1, in lattice orientation."""
    if kind is StrategyKind.CUBE:
        c = 1.0 / _SQRT3
        rows = [(sx * c, sy * c, sz * c)
                for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    elif kind is StrategyKind.HEXAGONAL_PRISM:
        a = math.sqrt(2.0 / 3.0)
        z = 1.0 / _SQRT3  # half height
        rows = [(x, y, s * z) for s in (1, -1) for x, y in _hexagon_xy(a)]
    elif kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        q = 1.0 / _SQRT2
        rows = [(sx * q, sy * q, 0.0) for sx in (-1, 1) for sy in (-1, 1)]
        rows += [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
        # degree-3 vertices, distance sqrt(3)/2
        rows += [(sx * q, 0.0, sz * 0.5) for sx in (-1, 1) for sz in (-1, 1)]
        rows += [(0.0, sy * q, sz * 0.5) for sy in (-1, 1) for sz in (-1, 1)]
    else:
        k = 1.0 / _SQRT5
        ints = sorted({p for base in itertools.permutations((0, 1, 2))
                       for p in itertools.product(*[(c, -c) for c in base])})
        rows = [(ix * k, iy * k, iz * k) for ix, iy, iz in ints]
    return np.asarray(rows, dtype=float)


def _face_directions(kind: StrategyKind) -> np.ndarray:
    """Vectors from a cell center to its face-adjacent neighbors, circumradius 1.

    One face per direction; the shared face lies on the midplane.
    """
    if kind is StrategyKind.CUBE:
        s = 2.0 / _SQRT3
        rows = [(s, 0, 0), (-s, 0, 0), (0, s, 0), (0, -s, 0), (0, 0, s), (0, 0, -s)]
    elif kind is StrategyKind.HEXAGONAL_PRISM:
        rows = [(x, y, 0.0) for x, y in _hexagon_xy(_SQRT2)]
        # rotate 30 degrees: prism side faces look toward the hexagon edge midpoints
        c30, s30 = _SQRT3 / 2.0, 0.5
        rows = [(c30 * x - s30 * y, s30 * x + c30 * y, 0.0) for x, y, _ in rows]
        z = 2.0 / _SQRT3
        rows += [(0.0, 0.0, z), (0.0, 0.0, -z)]
    elif kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        q = 1.0 / _SQRT2
        rows = [(_SQRT2, 0, 0), (-_SQRT2, 0, 0), (0, _SQRT2, 0), (0, -_SQRT2, 0)]
        rows += [(sx * q, sy * q, sz * 1.0)
                 for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    else:
        s = 4.0 / _SQRT5
        rows = [(s, 0, 0), (-s, 0, 0), (0, s, 0), (0, -s, 0), (0, 0, s), (0, 0, -s)]
        t = 2.0 / _SQRT5
        rows += [(sx * t, sy * t, sz * t)
                 for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    return np.asarray(rows, dtype=float)


def _build_face_rings(kind: StrategyKind) -> tuple[tuple[int, ...], ...]:
    verts = _unit_vertices(kind)
    rings: list[tuple[int, ...]] = []
    for n in _face_directions(kind):
        half = 0.5 * float(n @ n)
        on = np.flatnonzero(np.abs(verts @ n - half) <= 1e-9)
        nh = n / np.linalg.norm(n)
        ref = np.zeros(3)
        ref[int(np.argmin(np.abs(nh)))] = 1.0
        e1 = np.cross(nh, ref)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(nh, e1)  # (e1, e2, nh) right-handed: angle sort winds CCW from outside
        rel = verts[on] - verts[on].mean(axis=0)
        ring = on[np.argsort(np.arctan2(rel @ e2, rel @ e1))]
        ring = np.roll(ring, -int(np.argmin(ring)))
        rings.append(tuple(int(i) for i in ring))
    return tuple(rings)


_FACE_RINGS = {kind: _build_face_rings(kind) for kind in StrategyKind}


def cell_mesh(kind: StrategyKind, r: float, center=(0.0, 0.0, 0.0)) -> CellMesh:
    """Boundary mesh of the cell with circumradius r centered at center.

    Orientation matches the node lattice, so the meshes of two adjacent
    cells share their common face vertices exactly.
    """
    r = _check_radius(r)
    c = np.asarray(center, dtype=float)
    if c.shape != (3,) or not np.all(np.isfinite(c)):
        raise ValueError("center must be a finite 3D point")
    return CellMesh(_unit_vertices(kind) * r + c, _FACE_RINGS[kind])


def obj_lines(cells: Iterable[tuple[str, CellMesh]]) -> Iterator[str]:
    """Serialize meshes to Wavefront OBJ records, one object group per cell.

    Vertex coordinates carry 9 significant digits; face indices are 1-based
    and shared across the whole file.
    """
    offset = 0
    for name, mesh in cells:
        yield f"o {name}"
        for x, y, z in mesh.vertices:
            yield f"v {x:.9g} {y:.9g} {z:.9g}"
        for face in mesh.faces:
            yield "f " + " ".join(str(i + 1 + offset) for i in face)
        offset += len(mesh.vertices)


def write_obj(path, cells: Iterable[tuple[str, CellMesh]]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for line in obj_lines(cells):
            fh.write(line + "\n")
