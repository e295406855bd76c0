"""Transmission ranges and communication-graph analysis.

Two distinct range figures matter for a lattice placement and the
reports keep them apart:

* adjacency_complete_range: the largest per-axis minimum internode
  distance.  At this transmission radius every node reaches all of its
  face-adjacent cell neighbors, so routing can follow the cell tiling.
* bottleneck_range: the smallest radius at which the communication
  graph is connected at all.  For the truncated octahedron this is the
  hexagonal-face link distance 1.5492R, well below its 1.7889R
  adjacency figure, because the eight hexagonal links alone connect
  the lattice.

Per-axis minima (in units of R):

    strategy               u axis   v axis   w axis
    cube                   1.1547   1.1547   1.1547
    hexagonal prism        1.4142   1.4142   1.1547
    rhombic dodecahedron   1.4142   1.4142   1.4142
    truncated octahedron   1.7889   1.7889   1.5492
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cellgeom import StrategyKind
from .coverage import build_index
from .lattice import Placement, lattice_distance

EDGE_SLACK = 1e-9  # nodes within r_tx * (1 + slack) are linked

# Offsets of the face-adjacent cells in lattice coordinates.  Cross-checked
# against the cell meshes: place(offset) equals the face direction vector.
FACE_NEIGHBOR_OFFSETS: dict[StrategyKind, np.ndarray] = {
    StrategyKind.CUBE: np.array([
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
    ]),
    StrategyKind.HEXAGONAL_PRISM: np.array([
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (1, -1, 0), (-1, 1, 0),
        (0, 0, 1), (0, 0, -1),
    ]),
    StrategyKind.RHOMBIC_DODECAHEDRON: np.array([
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
        (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1), (1, 1, -1), (-1, -1, 1),
    ]),
    StrategyKind.TRUNCATED_OCTAHEDRON: np.array([
        # hexagonal faces (8)
        (0, 0, 1), (0, 0, -1), (-1, 0, 1), (1, 0, -1),
        (0, -1, 1), (0, 1, -1), (-1, -1, 1), (1, 1, -1),
        # square faces (6)
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (-1, -1, 2), (1, 1, -2),
    ]),
}
for _offs in FACE_NEIGHBOR_OFFSETS.values():
    _offs.setflags(write=False)


@dataclass(frozen=True)
class NeighborClass:
    """A group of equidistant neighbors; distance is in units of R."""

    axis_label: str  # "u", "v", "w", or "mixed"
    distance: float
    multiplicity: int


@dataclass(frozen=True)
class TransmissionRanges:
    per_axis: tuple[NeighborClass, NeighborClass, NeighborClass]
    max_of_min: float


def min_transmission_range(kind: StrategyKind) -> TransmissionRanges:
    """Minimum internode distance along each lattice axis, in units of R.

    max_of_min is the largest of the three: the radius needed before a
    node can reach neighbors along every axis.
    """
    origin = (0, 0, 0)
    classes = tuple(
        NeighborClass(label, lattice_distance(kind, origin, axis, 1.0), 2)
        for label, axis in (("u", (1, 0, 0)), ("v", (0, 1, 0)), ("w", (0, 0, 1)))
    )
    return TransmissionRanges(classes, max(c.distance for c in classes))


def voronoi_neighbor_classes(kind: StrategyKind) -> list[NeighborClass]:
    """Face-adjacent neighbor groups by distance, nearest first.

    Multiplicities sum to the cell's face count (6, 8, 12, 14).
    """
    origin = (0, 0, 0)
    by_dist: dict[float, list[tuple[int, int, int]]] = {}
    for off in FACE_NEIGHBOR_OFFSETS[kind]:
        d = lattice_distance(kind, origin, tuple(int(c) for c in off), 1.0)
        by_dist.setdefault(round(d, 12), []).append(tuple(int(c) for c in off))
    classes = []
    for d in sorted(by_dist):
        offs = by_dist[d]
        axes = {tuple(np.abs(o)) for o in offs}
        if axes == {(1, 0, 0)}:
            label = "u"
        elif axes == {(0, 1, 0)}:
            label = "v"
        elif axes == {(0, 0, 1)}:
            label = "w"
        else:
            label = "mixed"
        exact = lattice_distance(kind, origin, offs[0], 1.0)
        classes.append(NeighborClass(label, exact, len(offs)))
    return classes


@dataclass(frozen=True)
class CommGraph:
    """Undirected communication graph: node pairs within r_tx of each other.

    edges is (E, 2) int64 with i < j, sorted lexicographically; lengths
    holds the matching Euclidean distances.
    """

    node_count: int
    r_tx: float
    edges: np.ndarray
    lengths: np.ndarray

    def __post_init__(self) -> None:
        self.edges.setflags(write=False)
        self.lengths.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_lines(self):
        """Edge-list serialization, one 'i j dist' line per edge."""
        for (i, j), d in zip(self.edges, self.lengths):
            yield f"{i} {j} {d:.9g}"

    def to_edge_file(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            for line in self.edge_lines():
                fh.write(line + "\n")


@dataclass(frozen=True)
class ConnectivityReport:
    r_tx: float
    component_count: int
    is_connected: bool
    bottleneck_range: float
    adjacency_complete_range: float

    def to_json_obj(self) -> dict:
        return {
            "r_tx": self.r_tx,
            "component_count": self.component_count,
            "is_connected": self.is_connected,
            "bottleneck_range": self.bottleneck_range,
            "adjacency_complete_range": self.adjacency_complete_range,
        }


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


def build_graph(placement: Placement, r_tx: float) -> CommGraph:
    """Communication graph at transmission radius r_tx.

    Edge predicate: distance <= r_tx * (1 + 1e-9).  Candidate pairs come
    from the spatial index with bucket size equal to that bound, so the
    3x3x3 bucket neighborhood provably contains every admissible partner;
    nothing is ever compared all-pairs.
    """
    r_tx = float(r_tx)
    if not math.isfinite(r_tx) or r_tx <= 0.0:
        raise ValueError("transmission radius must be positive")
    pts = placement.points
    if len(pts) == 0:
        raise ValueError("placement has no nodes")
    bound = r_tx * (1.0 + EDGE_SLACK)
    index = build_index(pts, bound)
    pair_i: list[np.ndarray] = []
    pair_j: list[np.ndarray] = []
    pair_d: list[np.ndarray] = []
    for key, members in index.buckets.items():
        cand = index._gather(np.asarray(key))
        dx = pts[members, 0:1] - pts[cand, 0][None, :]
        dy = pts[members, 1:2] - pts[cand, 1][None, :]
        dz = pts[members, 2:3] - pts[cand, 2][None, :]
        d2 = dx * dx + dy * dy + dz * dz
        take = (np.sqrt(d2) <= bound) & (cand[None, :] > members[:, None])
        rows, cols = np.nonzero(take)
        if len(rows):
            pair_i.append(members[rows])
            pair_j.append(cand[cols])
            pair_d.append(np.sqrt(d2[rows, cols]))
    if pair_i:
        i = np.concatenate(pair_i)
        j = np.concatenate(pair_j)
        d = np.concatenate(pair_d)
        order = np.lexsort((j, i))
        edges = np.stack([i[order], j[order]], axis=1)
        lengths = d[order]
    else:
        edges = np.empty((0, 2), dtype=np.int64)
        lengths = np.empty(0, dtype=float)
    return CommGraph(len(pts), r_tx, edges, lengths)


def component_count(graph: CommGraph) -> int:
    dsu = DisjointSet(graph.node_count)
    for i, j in graph.edges:
        dsu.union(int(i), int(j))
    return dsu.count


def bottleneck_range_mst(points) -> float:
    """Longest edge of a Euclidean minimum spanning tree: the smallest
    transmission radius that connects the point set.  Prim's algorithm,
    O(n^2) with vectorized distance updates."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n <= 1:
        return 0.0
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    diff = pts - pts[0]
    dist = np.sqrt((diff * diff).sum(axis=1))
    dist[0] = np.inf
    longest = 0.0
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, dist)
        nxt = int(np.argmin(masked))
        longest = max(longest, float(masked[nxt]))
        in_tree[nxt] = True
        diff = pts - pts[nxt]
        dist = np.minimum(dist, np.sqrt((diff * diff).sum(axis=1)))
    return longest


def bottleneck_range_search(points, candidates=None) -> float:
    """Bottleneck radius by binary search over candidate distances.

    Independent cross-check for bottleneck_range_mst: finds the smallest
    candidate radius whose graph is connected.  Defaults to all distinct
    pairwise distances, so it is quadratic in memory; meant for modest n.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n <= 1:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    dmat = np.sqrt((diff * diff).sum(axis=-1))
    iu, ju = np.triu_indices(n, k=1)
    if candidates is None:
        candidates = np.unique(dmat[iu, ju])
    cands = np.sort(np.asarray(candidates, dtype=float))

    def connected(r: float) -> bool:
        dsu = DisjointSet(n)
        keep = dmat[iu, ju] <= r * (1.0 + EDGE_SLACK)
        for a, b in zip(iu[keep], ju[keep]):
            dsu.union(int(a), int(b))
        return dsu.count == 1

    lo, hi = 0, len(cands) - 1
    if not connected(float(cands[hi])):
        return math.inf
    while lo < hi:
        mid = (lo + hi) // 2
        if connected(float(cands[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def analyze(placement: Placement, r_tx: float) -> ConnectivityReport:
    """Connectivity report for a placement at transmission radius r_tx.

    bottleneck_range comes from the MST longest edge;
    adjacency_complete_range is the strategy's max-of-min axis distance
    scaled by the placement radius.  They differ in general (see module
    docstring) and are reported under distinct names.
    """
    graph = build_graph(placement, r_tx)
    components = component_count(graph)
    ranges = min_transmission_range(placement.kind)
    return ConnectivityReport(
        r_tx=r_tx,
        component_count=components,
        is_connected=components == 1,
        bottleneck_range=bottleneck_range_mst(placement.points),
        adjacency_complete_range=ranges.max_of_min * placement.r,
    )
