import math

import numpy as np
import pytest

from polycover import cellgeom, connectivity
from polycover.cellgeom import StrategyKind
from polycover.connectivity import (
    FACE_NEIGHBOR_OFFSETS,
    bottleneck_range_mst,
    bottleneck_range_search,
    build_graph,
    component_count,
    min_transmission_range,
    voronoi_neighbor_classes,
)
from polycover.lattice import Placement, lattice_distance

ALL_KINDS = list(StrategyKind)
SQ3 = math.sqrt(3.0)

# per-axis minimum internode distances in units of R
AXIS_MINIMA = {
    StrategyKind.CUBE: (2.0 / SQ3, 2.0 / SQ3, 2.0 / SQ3),
    StrategyKind.HEXAGONAL_PRISM: (math.sqrt(2.0), math.sqrt(2.0), 2.0 / SQ3),
    StrategyKind.RHOMBIC_DODECAHEDRON: (math.sqrt(2.0),) * 3,
    StrategyKind.TRUNCATED_OCTAHEDRON: (
        4.0 / math.sqrt(5.0), 4.0 / math.sqrt(5.0), 2.0 * SQ3 / math.sqrt(5.0)),
}

FACE_COUNTS = {
    StrategyKind.CUBE: 6,
    StrategyKind.HEXAGONAL_PRISM: 8,
    StrategyKind.RHOMBIC_DODECAHEDRON: 12,
    StrategyKind.TRUNCATED_OCTAHEDRON: 14,
}


def cube_block(side: int, r: float = 1.0) -> Placement:
    coords = [(u, v, w) for u in range(side) for v in range(side)
              for w in range(side)]
    return Placement.from_coords(StrategyKind.CUBE, coords, (0.0, 0.0, 0.0), r)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_min_transmission_range_closed_forms(kind):
    ranges = min_transmission_range(kind)
    for cls, want, label in zip(ranges.per_axis, AXIS_MINIMA[kind], "uvw"):
        assert cls.distance == pytest.approx(want, rel=1e-12)
        assert cls.axis_label == label
        assert cls.multiplicity == 2
    assert ranges.max_of_min == pytest.approx(max(AXIS_MINIMA[kind]), rel=1e-12)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_neighbor_classes_cover_every_face(kind):
    classes = voronoi_neighbor_classes(kind)
    assert sum(c.multiplicity for c in classes) == FACE_COUNTS[kind]
    dists = [c.distance for c in classes]
    assert dists == sorted(dists)


def test_neighbor_class_structure():
    cube = voronoi_neighbor_classes(StrategyKind.CUBE)
    assert [(c.multiplicity, c.axis_label) for c in cube] == [(6, "mixed")]
    hp = voronoi_neighbor_classes(StrategyKind.HEXAGONAL_PRISM)
    assert [(c.multiplicity, c.axis_label) for c in hp] == [(2, "w"), (6, "mixed")]
    assert hp[0].distance == pytest.approx(2.0 / SQ3, rel=1e-12)
    assert hp[1].distance == pytest.approx(math.sqrt(2.0), rel=1e-12)
    rd = voronoi_neighbor_classes(StrategyKind.RHOMBIC_DODECAHEDRON)
    assert [(c.multiplicity, c.axis_label) for c in rd] == [(12, "mixed")]
    assert rd[0].distance == pytest.approx(math.sqrt(2.0), rel=1e-12)
    to = voronoi_neighbor_classes(StrategyKind.TRUNCATED_OCTAHEDRON)
    assert [c.multiplicity for c in to] == [8, 6]  # hexagonal then square faces
    assert to[0].distance == pytest.approx(2.0 * SQ3 / math.sqrt(5.0), rel=1e-12)
    assert to[1].distance == pytest.approx(4.0 / math.sqrt(5.0), rel=1e-12)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_face_neighbor_offsets_match_mesh_face_directions(kind):
    # each offset, placed on the lattice, is the through-face neighbor vector
    offsets = FACE_NEIGHBOR_OFFSETS[kind]
    from polycover.lattice import _place_many

    placed = _place_many(kind, offsets, (0.0, 0.0, 0.0), 1.0)
    directions = cellgeom._face_directions(kind)
    assert len(placed) == len(directions)
    gap = np.linalg.norm(placed[:, None, :] - directions[None, :, :], axis=-1)
    match = np.argmin(gap, axis=1)
    assert gap[np.arange(len(placed)), match].max() < 1e-9
    assert len(set(match.tolist())) == len(placed)  # a bijection, not a collapse


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_face_neighbor_distances_match_lattice_distance(kind):
    for off in FACE_NEIGHBOR_OFFSETS[kind]:
        d = lattice_distance(kind, (0, 0, 0), tuple(int(c) for c in off), 3.0)
        assert d <= min_transmission_range(kind).max_of_min * 3.0 * (1 + 1e-12)


class TestBuildGraph:
    def test_cube_block_face_links(self):
        pl = cube_block(5)
        a = 2.0 / SQ3
        graph = build_graph(pl, a * 1.001)
        # 5x5 lines of 4 edges along each of the three axes
        assert graph.edge_count == 300
        degrees = np.bincount(graph.edges.ravel(), minlength=len(pl))
        interior = [i for i, (u, v, w) in enumerate(pl.coords)
                    if 0 < u < 4 and 0 < v < 4 and 0 < w < 4]
        assert all(degrees[i] == 6 for i in interior)
        assert component_count(graph) == 1

    def test_no_edges_below_the_minimum_spacing(self):
        pl = cube_block(4)
        graph = build_graph(pl, (2.0 / SQ3) * 0.999)
        assert graph.edge_count == 0
        assert component_count(graph) == len(pl)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(19)
        coords = rng.integers(-4, 5, size=(60, 3))
        coords = np.unique(coords, axis=0)
        pl = Placement.from_coords(StrategyKind.RHOMBIC_DODECAHEDRON, coords,
                                   (0.2, -0.4, 1.0), 0.8)
        r_tx = 1.9 * 0.8
        graph = build_graph(pl, r_tx)
        want = []
        pts = pl.points
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = float(np.linalg.norm(pts[i] - pts[j]))
                if d <= r_tx * (1.0 + 1e-9):
                    want.append((i, j, d))
        assert graph.edge_count == len(want)
        np.testing.assert_array_equal(graph.edges,
                                      np.array([(i, j) for i, j, _ in want]))
        np.testing.assert_allclose(graph.lengths, [d for _, _, d in want],
                                   rtol=1e-12)

    def test_edges_are_sorted_and_deduplicated(self):
        pl = cube_block(3)
        graph = build_graph(pl, 2.1)
        assert np.all(graph.edges[:, 0] < graph.edges[:, 1])
        rows = [tuple(e) for e in graph.edges]
        assert rows == sorted(rows)
        assert len(set(rows)) == len(rows)

    def test_edge_growth_is_monotone_in_radius(self):
        pl = cube_block(4, r=2.0)
        prev: set = set()
        prev_components = len(pl) + 1
        for r_tx in (2.0, 2.4, 3.3, 4.1):
            graph = build_graph(pl, r_tx)
            edges = {tuple(e) for e in graph.edges}
            assert prev <= edges
            components = component_count(graph)
            assert components <= prev_components
            prev, prev_components = edges, components

    def test_rejects_bad_radius(self):
        pl = cube_block(2)
        with pytest.raises(ValueError):
            build_graph(pl, 0.0)
        with pytest.raises(ValueError):
            build_graph(pl, -1.0)

    def test_single_node(self):
        pl = Placement.from_coords(StrategyKind.CUBE, [(0, 0, 0)], (0.0,) * 3, 1.0)
        graph = build_graph(pl, 5.0)
        assert graph.edge_count == 0
        assert component_count(graph) == 1

    def test_edge_lines_format(self, tmp_path):
        pl = cube_block(2)
        graph = build_graph(pl, 1.2)
        lines = list(graph.edge_lines())
        assert len(lines) == graph.edge_count
        i, j, d = lines[0].split()
        assert (int(i), int(j)) == tuple(graph.edges[0])
        assert float(d) == pytest.approx(graph.lengths[0], rel=1e-8)
        path = tmp_path / "edges.txt"
        graph.to_edge_file(path)
        assert path.read_text(encoding="ascii").splitlines() == lines


class TestBottleneckRange:
    def test_chain_of_points(self):
        pts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [3.5, 0.0, 0.0]])
        assert bottleneck_range_mst(pts) == pytest.approx(2.5, rel=1e-12)
        assert bottleneck_range_search(pts) == pytest.approx(2.5, rel=1e-12)

    def test_degenerate_inputs(self):
        assert bottleneck_range_mst(np.zeros((1, 3))) == 0.0
        assert bottleneck_range_search(np.zeros((1, 3))) == 0.0

    def test_both_routes_agree_on_random_sets(self):
        rng = np.random.default_rng(71)
        for _ in range(10):
            pts = rng.uniform(-5, 5, size=(30, 3))
            a = bottleneck_range_mst(pts)
            b = bottleneck_range_search(pts)
            assert a == pytest.approx(b, rel=1e-9)

    def test_lattice_block_bottleneck_is_the_min_spacing(self):
        pl = cube_block(4, r=1.5)
        want = 1.5 * 2.0 / SQ3
        assert bottleneck_range_mst(pl.points) == pytest.approx(want, rel=1e-9)

    def test_search_accepts_explicit_candidates(self):
        pts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.1, 0.0, 0.0]])
        got = bottleneck_range_search(pts, candidates=[0.5, 1.1, 2.0, 3.0])
        assert got == pytest.approx(1.1, rel=1e-12)


class TestAnalyze:
    def test_connected_cube_block(self):
        pl = cube_block(4, r=2.0)
        report = connectivity.analyze(pl, 2.0 * 1.2)
        assert report.is_connected
        assert report.component_count == 1
        want = 2.0 * 2.0 / SQ3
        assert report.bottleneck_range == pytest.approx(want, rel=1e-9)
        assert report.adjacency_complete_range == pytest.approx(want, rel=1e-12)

    def test_disconnected_clusters(self):
        coords = ([(u, v, w) for u in range(2) for v in range(2) for w in range(2)]
                  + [(u, v, w) for u in range(10, 12) for v in range(2)
                     for w in range(2)])
        pl = Placement.from_coords(StrategyKind.CUBE, coords, (0.0,) * 3, 1.0)
        report = connectivity.analyze(pl, (2.0 / SQ3) * 1.01)
        assert not report.is_connected
        assert report.component_count == 2
        # the bottleneck radius must bridge the cluster gap
        assert report.bottleneck_range == pytest.approx(9 * 2.0 / SQ3, rel=1e-9)

    def test_report_keys_are_distinct(self):
        pl = cube_block(3)
        obj = connectivity.analyze(pl, 1.2).to_json_obj()
        assert set(obj) == {"r_tx", "component_count", "is_connected",
                            "bottleneck_range", "adjacency_complete_range"}
