"""Sensor-node placement on 3D space-filling lattices.

Plans node positions for four placement strategies (cube, hexagonal
prism, rhombic dodecahedron, truncated octahedron), each scaled so the
cell circumradius equals the sensing radius, then verifies full
coverage of a target box and analyzes communication-graph connectivity.
"""

from .cellgeom import (
    CellGeometry,
    CellMesh,
    StrategyKind,
    cell_geometry,
    cell_mesh,
    hexagon_quotient_2d,
    hexagonal_prism_quotient,
    isoperimetric_quotient,
    node_count_ratio,
    obj_lines,
    volumetric_quotient,
    write_obj,
)
from .connectivity import (
    FACE_NEIGHBOR_OFFSETS,
    CommGraph,
    ConnectivityReport,
    NeighborClass,
    TransmissionRanges,
    analyze,
    bottleneck_range_mst,
    bottleneck_range_search,
    build_graph,
    component_count,
    min_transmission_range,
    voronoi_neighbor_classes,
)
from .coverage import (
    CoverageReport,
    SamplingSpec,
    SpatialIndex,
    build_index,
    max_gap_estimate,
    nearest_distances,
    sample_points,
    verify_coverage,
)
from .lattice import (
    LatticeCoord,
    Placement,
    Point3,
    Region,
    enumerate_region,
    lattice_distance,
    nearest_cell,
    place,
    placement_from_csv,
    placement_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "CellGeometry",
    "CellMesh",
    "CommGraph",
    "ConnectivityReport",
    "CoverageReport",
    "FACE_NEIGHBOR_OFFSETS",
    "LatticeCoord",
    "NeighborClass",
    "Placement",
    "Point3",
    "Region",
    "SamplingSpec",
    "SpatialIndex",
    "StrategyKind",
    "TransmissionRanges",
    "analyze",
    "bottleneck_range_mst",
    "bottleneck_range_search",
    "build_graph",
    "build_index",
    "cell_geometry",
    "cell_mesh",
    "component_count",
    "enumerate_region",
    "hexagon_quotient_2d",
    "hexagonal_prism_quotient",
    "isoperimetric_quotient",
    "lattice_distance",
    "max_gap_estimate",
    "min_transmission_range",
    "nearest_cell",
    "nearest_distances",
    "node_count_ratio",
    "obj_lines",
    "place",
    "placement_from_csv",
    "placement_from_json",
    "sample_points",
    "verify_coverage",
    "volumetric_quotient",
    "voronoi_neighbor_classes",
    "write_obj",
]
