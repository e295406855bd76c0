"""Figure rendering for the CLI report paths.

Everything here writes PNG files through the Agg backend, so it works
headless.  Figures are diagnostic companions to the delimited output,
not a primary data channel.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .connectivity import CommGraph  # noqa: E402
from .coverage import CoverageReport  # noqa: E402
from .lattice import Placement, Region  # noqa: E402


def _draw_region(ax, region: Region) -> None:
    corners = region.corners()
    # corners() orders by bits (x, y, z); box edges join corners that
    # differ in exactly one bit
    for i in range(8):
        for bit in (4, 2, 1):
            j = i ^ bit
            if j > i:
                seg = corners[[i, j]]
                ax.plot(seg[:, 0], seg[:, 1], seg[:, 2],
                        color="0.4", linewidth=0.8)


def save_placement_figure(placement: Placement, region: Region, path) -> None:
    """3D scatter of the node positions inside the target region."""
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    pts = placement.points
    ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=12, depthshade=True)
    _draw_region(ax, region)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(f"{placement.kind.label}: {len(placement)} nodes, R={placement.r:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_coverage_figure(report: CoverageReport, distances, sensing_radius: float,
                         path) -> None:
    """Histogram of sample-to-nearest-node distances with the sensing
    radius marked; fully covered runs sit entirely left of the line."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.hist(distances, bins=60, color="#4878a8")
    ax.axvline(sensing_radius, color="crimson", linewidth=1.2,
               label=f"sensing radius {sensing_radius:g}")
    ax.axvline(report.max_nearest_distance, color="black", linestyle="--",
               linewidth=1.0,
               label=f"worst sample {report.max_nearest_distance:.4g}")
    ax.set_xlabel("distance to nearest node")
    ax.set_ylabel("samples")
    pct = 100.0 * report.coverage_fraction
    ax.set_title(f"coverage {pct:.2f}% over {report.samples} samples")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_compare_figure(rows: list[dict], path) -> None:
    """Side-by-side bars: volumetric quotient and node count per strategy."""
    labels = [row["strategy"] for row in rows]
    quotients = [row["volumetric_quotient"] for row in rows]
    counts = [row["node_count"] for row in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    x = np.arange(len(labels))
    ax1.bar(x, quotients, color="#4878a8")
    ax1.set_xticks(x, labels, rotation=20, ha="right")
    ax1.set_ylabel("volumetric quotient")
    ax1.set_ylim(0, 1)
    ax2.bar(x, counts, color="#8a5a9e")
    ax2.set_xticks(x, labels, rotation=20, ha="right")
    ax2.set_ylabel("nodes to cover region")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_graph_figure(graph: CommGraph, report, path) -> None:
    """Edge-length histogram with the transmission radius and both
    connectivity thresholds marked."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if graph.edge_count:
        ax.hist(graph.lengths, bins=40, color="#4878a8")
    ax.axvline(graph.r_tx, color="crimson", linewidth=1.2,
               label=f"transmission radius {graph.r_tx:g}")
    ax.axvline(report.bottleneck_range, color="black", linestyle="--",
               linewidth=1.0, label=f"bottleneck {report.bottleneck_range:.4g}")
    ax.axvline(report.adjacency_complete_range, color="darkorange",
               linestyle=":", linewidth=1.4,
               label=f"adjacency complete {report.adjacency_complete_range:.4g}")
    ax.set_xlabel("edge length")
    ax.set_ylabel("edges")
    state = "connected" if report.is_connected else f"{report.component_count} components"
    ax.set_title(f"{graph.edge_count} edges, {state}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
