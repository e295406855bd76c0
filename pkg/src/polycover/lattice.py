"""Node lattices: integer coordinates to world positions and back.

Each strategy maps integer lattice coordinates (u, v, w) to the cell
center positions of its tiling, anchored at a seed point:

    cube  (x, y, z) = seed + (u, v, w) * 2R/sqrt(3)
    hp    x = u * R sqrt(3/2),  y = (u + 2v) * R/sqrt(2),  z = w * 2R/sqrt(3)
    rd    x = (2u + w) * R/sqrt(2),  y = (2v + w) * R/sqrt(2),  z = w * R
    to    x = (2u + w) * 2R/sqrt(5), y = (2v + w) * 2R/sqrt(5), z = w * 2R/sqrt(5)

The rhombic-dodecahedron map generates a face-centered cubic lattice and
the truncated-octahedron map a body-centered cubic lattice; the cube and
prism maps are the obvious stacked tilings.  Internode distances have
closed forms in the coordinate deltas (see lattice_distance).

All maps are affine and invertible, which nearest_cell and
enumerate_region exploit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .cellgeom import StrategyKind, _check_radius

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)

# Cap on enumeration candidates so a typo'd region errors instead of thrashing.
_MAX_CANDIDATES = 50_000_000

CSV_HEADER = "u,v,w,x,y,z"


class LatticeCoord(NamedTuple):
    u: int
    v: int
    w: int


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def _as_point(p) -> Point3:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"expected a finite 3D point, got {p!r}")
    return Point3(float(arr[0]), float(arr[1]), float(arr[2]))


def _as_coords(coords) -> np.ndarray:
    arr = np.asarray(coords)
    if arr.ndim == 1:
        arr = arr.reshape(1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("lattice coordinates must have shape (3,) or (N, 3)")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.all(arr == rounded):
            raise ValueError("lattice coordinates must be integers")
        arr = rounded
    return arr.astype(np.int64)


@dataclass(frozen=True)
class Region:
    """Axis-aligned box with positive extent on every axis."""

    min_corner: Point3
    max_corner: Point3

    def __post_init__(self) -> None:
        object.__setattr__(self, "min_corner", _as_point(self.min_corner))
        object.__setattr__(self, "max_corner", _as_point(self.max_corner))
        for lo, hi in zip(self.min_corner, self.max_corner):
            if not lo < hi:
                raise ValueError(
                    f"region must have positive extent on every axis, got "
                    f"{self.min_corner} .. {self.max_corner}"
                )

    @classmethod
    def from_box(cls, size, center=(0.0, 0.0, 0.0)) -> "Region":
        size = np.broadcast_to(np.asarray(size, dtype=float), (3,))
        c = np.asarray(center, dtype=float)
        return cls(Point3(*(c - size / 2.0)), Point3(*(c + size / 2.0)))

    @property
    def center(self) -> Point3:
        return Point3(*((np.asarray(self.min_corner) + np.asarray(self.max_corner)) / 2.0))

    @property
    def extent(self) -> np.ndarray:
        return np.asarray(self.max_corner) - np.asarray(self.min_corner)

    @property
    def volume(self) -> float:
        return float(np.prod(self.extent))

    def expanded(self, margin: float) -> "Region":
        if margin < 0:
            raise ValueError("expansion margin must be nonnegative")
        lo = np.asarray(self.min_corner) - margin
        hi = np.asarray(self.max_corner) + margin
        return Region(Point3(*lo), Point3(*hi))

    def contains(self, points) -> np.ndarray:
        """Inclusive membership test; points is (N, 3), returns (N,) bools."""
        pts = np.asarray(points, dtype=float)
        lo = np.asarray(self.min_corner)
        hi = np.asarray(self.max_corner)
        return np.all((pts >= lo) & (pts <= hi), axis=-1)

    def corners(self) -> np.ndarray:
        lo, hi = self.min_corner, self.max_corner
        return np.array([(x, y, z) for x in (lo.x, hi.x)
                         for y in (lo.y, hi.y) for z in (lo.z, hi.z)])


def _place_many(kind: StrategyKind, coords: np.ndarray, seed, r: float) -> np.ndarray:
    """Vectorized placement map; the scalar place() delegates here so both
    produce bit-identical positions."""
    u, v, w = coords[:, 0], coords[:, 1], coords[:, 2]
    sx, sy, sz = seed
    if kind is StrategyKind.CUBE:
        s = 2.0 * r / _SQRT3
        x, y, z = sx + u * s, sy + v * s, sz + w * s
    elif kind is StrategyKind.HEXAGONAL_PRISM:
        x = sx + u * (r * math.sqrt(1.5))
        y = sy + (u + 2 * v) * (r / _SQRT2)
        z = sz + w * (2.0 * r / _SQRT3)
    elif kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        q = r / _SQRT2
        x = sx + (2 * u + w) * q
        y = sy + (2 * v + w) * q
        z = sz + w * r
    else:
        t = 2.0 * r / _SQRT5
        x = sx + (2 * u + w) * t
        y = sy + (2 * v + w) * t
        z = sz + w * t
    return np.stack([x, y, z], axis=-1)


def _inverse_many(kind: StrategyKind, points: np.ndarray, seed, r: float) -> np.ndarray:
    """Exact inverse of the placement map, returning fractional (u, v, w)."""
    p = np.asarray(points, dtype=float) - np.asarray(seed, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    if kind is StrategyKind.CUBE:
        s = 2.0 * r / _SQRT3
        u, v, w = x / s, y / s, z / s
    elif kind is StrategyKind.HEXAGONAL_PRISM:
        u = x / (r * math.sqrt(1.5))
        v = (y * _SQRT2 / r - u) / 2.0
        w = z * _SQRT3 / (2.0 * r)
    elif kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        w = z / r
        u = (x * _SQRT2 / r - w) / 2.0
        v = (y * _SQRT2 / r - w) / 2.0
    else:
        t = 2.0 * r / _SQRT5
        w = z / t
        u = (x / t - w) / 2.0
        v = (y / t - w) / 2.0
    return np.stack([u, v, w], axis=-1)


def place(kind: StrategyKind, coord, seed, r: float) -> Point3:
    """World position of the lattice node coord for the given strategy."""
    r = _check_radius(r)
    seed = _as_point(seed)
    pts = _place_many(kind, _as_coords(coord), seed, r)
    return Point3(float(pts[0, 0]), float(pts[0, 1]), float(pts[0, 2]))


def lattice_distance(kind: StrategyKind, a, b, r: float) -> float:
    """Internode Euclidean distance from coordinate deltas, in closed form.

    cube  2R/sqrt(3) * sqrt(du^2 + dv^2 + dw^2)
    hp    R sqrt(2)  * sqrt(du^2 + du dv + dv^2 + (2/3) dw^2)
    rd    R sqrt(2)  * sqrt(du^2 + dv^2 + dw^2 + du dw + dv dw)
    to    4R/sqrt(5) * sqrt(du^2 + dv^2 + du dw + dv dw + (3/4) dw^2)
    """
    r = _check_radius(r)
    (au, av, aw), (bu, bv, bw) = _as_coords(a)[0], _as_coords(b)[0]
    du, dv, dw = int(bu - au), int(bv - av), int(bw - aw)
    if kind is StrategyKind.CUBE:
        return (2.0 * r / _SQRT3) * math.sqrt(du * du + dv * dv + dw * dw)
    if kind is StrategyKind.HEXAGONAL_PRISM:
        return r * _SQRT2 * math.sqrt(du * du + du * dv + dv * dv + (2.0 / 3.0) * dw * dw)
    if kind is StrategyKind.RHOMBIC_DODECAHEDRON:
        return r * _SQRT2 * math.sqrt(du * du + dv * dv + dw * dw + du * dw + dv * dw)
    return (4.0 * r / _SQRT5) * math.sqrt(du * du + dv * dv + du * dw + dv * dw + 0.75 * dw * dw)


def nearest_cell(kind: StrategyKind, p, seed, r: float) -> LatticeCoord:
    """Lattice coordinate of the cell whose center is nearest to p.

    Inverts the affine map, rounds, then exhaustively checks the 3x3x3
    integer neighborhood; ties break to the lexicographically smallest
    (u, v, w).
    """
    r = _check_radius(r)
    seed = _as_point(seed)
    p = _as_point(p)
    base = np.rint(_inverse_many(kind, np.asarray(p), seed, r)).astype(np.int64)
    offs = np.array(list(np.ndindex(3, 3, 3)), dtype=np.int64) - 1  # lexicographic
    cands = base + offs
    pos = _place_many(kind, cands, seed, r)
    dx, dy, dz = pos[:, 0] - p.x, pos[:, 1] - p.y, pos[:, 2] - p.z
    d2 = dx * dx + dy * dy + dz * dz
    return LatticeCoord(*(int(c) for c in cands[int(np.argmin(d2))]))


@dataclass(frozen=True)
class Placement:
    """An enumerated set of lattice nodes.

    coords is (N, 3) int64, points is (N, 3) float64; points[i] equals
    place(kind, coords[i], seed, r) bit for bit, because both come from
    the same vectorized map.
    """

    kind: StrategyKind
    r: float
    seed: Point3
    coords: np.ndarray
    points: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", _as_point(self.seed))
        if self.coords.shape != self.points.shape or self.coords.ndim != 2:
            raise ValueError("coords and points must both have shape (N, 3)")
        self.coords.setflags(write=False)
        self.points.setflags(write=False)

    @classmethod
    def from_coords(cls, kind: StrategyKind, coords, seed, r: float) -> "Placement":
        r = _check_radius(r)
        seed = _as_point(seed)
        arr = _as_coords(coords)
        if len(np.unique(arr, axis=0)) != len(arr):
            raise ValueError("lattice coordinates must be pairwise distinct")
        return cls(kind, r, seed, arr, _place_many(kind, arr, seed, r))

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def node_count(self) -> int:
        return len(self.coords)

    def nodes(self) -> Iterator[tuple[LatticeCoord, Point3]]:
        for c, p in zip(self.coords, self.points):
            yield LatticeCoord(*map(int, c)), Point3(*map(float, p))

    # -- serialization ------------------------------------------------------

    def csv_lines(self) -> Iterator[str]:
        yield CSV_HEADER
        for c, p in zip(self.coords, self.points):
            yield f"{c[0]},{c[1]},{c[2]},{p[0]:.9g},{p[1]:.9g},{p[2]:.9g}"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="") as fh:
            for line in self.csv_lines():
                fh.write(line + "\n")

    def to_json_obj(self) -> dict:
        return {
            "strategy": self.kind.value,
            "r": self.r,
            "seed": list(self.seed),
            "nodes": [[int(c[0]), int(c[1]), int(c[2]),
                       float(p[0]), float(p[1]), float(p[2])]
                      for c, p in zip(self.coords, self.points)],
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(self.to_json_obj(), fh, indent=1)
            fh.write("\n")


def _rebuild_placement(kind, r, seed, coords, file_points, source) -> Placement:
    # Positions are recomputed from (u, v, w) so the bitwise place() invariant
    # holds for loaded placements; the file's x,y,z only cross-check the config.
    placement = Placement.from_coords(kind, coords, seed, r)
    if len(file_points):
        tol = 1e-6 * max(1.0, r)
        err = np.abs(np.asarray(file_points, dtype=float) - placement.points).max()
        if err > tol:
            raise ValueError(
                f"node positions in {source} disagree with strategy/r/seed "
                f"(max deviation {err:.3g})"
            )
    return placement


def placement_from_csv(path, kind: StrategyKind, r: float, seed) -> Placement:
    """Load a node CSV written by Placement.to_csv.

    The strategy, radius, and seed are not stored in the CSV; they must be
    supplied and are cross-checked against the stored positions.
    """
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"node file {path} is empty") from None
        if [h.strip() for h in header] != CSV_HEADER.split(","):
            raise ValueError(f"node file {path} must start with header '{CSV_HEADER}'")
        coords, pts = [], []
        for row in reader:
            if not row:
                continue
            coords.append([int(row[0]), int(row[1]), int(row[2])])
            pts.append([float(row[3]), float(row[4]), float(row[5])])
    if not coords:
        raise ValueError(f"node file {path} contains no nodes")
    return _rebuild_placement(kind, _check_radius(r), _as_point(seed),
                              np.asarray(coords, dtype=np.int64), pts, str(path))


def placement_from_json(path) -> Placement:
    with open(path, "r", encoding="ascii") as fh:
        obj = json.load(fh)
    try:
        kind = StrategyKind.parse(obj["strategy"])
        r = _check_radius(obj["r"])
        seed = _as_point(obj["seed"])
        nodes = obj["nodes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"placement file {path} is malformed: {exc}") from None
    if not nodes:
        raise ValueError(f"placement file {path} contains no nodes")
    arr = np.asarray(nodes, dtype=float)
    coords = arr[:, :3].astype(np.int64)
    return _rebuild_placement(kind, r, seed, coords, arr[:, 3:6], str(path))


def enumerate_region(kind: StrategyKind, region: Region, seed, r: float,
                     expand_boundary: bool = True) -> Placement:
    """All lattice nodes that can help cover region, sorted by (u, v, w).

    By default the region is expanded outward by r on every face before
    membership testing: any point of the original region is within r of
    some lattice node (the cells have circumradius r), and that node lies
    in the expanded box.  With expand_boundary=False only nodes inside the
    region itself are returned, which reproduces interior-only counts.
    """
    r = _check_radius(r)
    seed = _as_point(seed)
    target = region.expanded(r) if expand_boundary else region
    frac = _inverse_many(kind, target.corners(), seed, r)
    lo = np.floor(frac.min(axis=0)).astype(np.int64) - 1
    hi = np.ceil(frac.max(axis=0)).astype(np.int64) + 1
    counts = hi - lo + 1
    if int(np.prod(counts)) > _MAX_CANDIDATES:
        raise ValueError("region spans too many lattice cells to enumerate")
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(3)]
    grids = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)  # lexicographic order
    points = _place_many(kind, coords, seed, r)
    keep = target.contains(points)
    return Placement(kind, r, seed, coords[keep], points[keep])
