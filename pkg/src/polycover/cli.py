"""Command line interface.

Subcommands:

  plan          generate a placement for one strategy, write the node list
  verify        sample a region and check for full sensing coverage
  compare       contrast all four strategies over one region
  graph         build the communication graph and report connectivity
  export-cells  write the cell polyhedra as a Wavefront OBJ

Exit status is 0 on success (for verify: full coverage; for graph: a
connected graph), 1 when the check ran and failed, and 2 on bad input
or usage.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .cellgeom import StrategyKind, cell_geometry, cell_mesh, volumetric_quotient, write_obj
from .connectivity import analyze, build_graph, min_transmission_range
from .coverage import SamplingSpec, nearest_distances, sample_points, verify_coverage
from .lattice import (
    Placement,
    Region,
    enumerate_region,
    placement_from_csv,
    placement_from_json,
)


def _parse_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    x, y, z = (float(p) for p in parts)
    return (x, y, z)


def _parse_length(text: str, r: float) -> float:
    """A plain distance, or a multiple of the sensing radius like '1.7889R'."""
    t = text.strip()
    if t.endswith(("R", "r")):
        return float(t[:-1]) * r
    return float(t)


def _region_from_args(args, r: float) -> Region:
    center = _parse_triple(args.center)
    if args.span is not None:
        side = args.span * 2.0 * r / math.sqrt(3.0)
        return Region.from_box((side, side, side), center)
    if args.box is None:
        raise ValueError("give a region with --box X,Y,Z or --span N")
    return Region.from_box(_parse_triple(args.box), center)


def _load_nodes(args) -> Placement:
    path = args.nodes
    if path.endswith(".json"):
        return placement_from_json(path)
    if args.strategy is None or args.r is None:
        raise ValueError("reading a CSV node file needs --strategy and --r "
                         "(and the --center used when it was written)")
    kind = StrategyKind.parse(args.strategy)
    return placement_from_csv(path, kind, float(args.r), _parse_triple(args.center))


def _placement_for(args, need_region: bool) -> tuple[Placement, Region | None]:
    """Placement from --nodes when given, otherwise generated on the lattice."""
    if getattr(args, "nodes", None):
        pl = _load_nodes(args)
        region = None
        if args.box is not None or args.span is not None:
            region = _region_from_args(args, pl.r)
        if need_region and region is None:
            raise ValueError("a sampling region is required: give --box or --span")
        return pl, region
    if args.strategy is None or args.r is None:
        raise ValueError("give --strategy and --r, or load a node list with --nodes")
    kind = StrategyKind.parse(args.strategy)
    r = float(args.r)
    region = _region_from_args(args, r)
    pl = enumerate_region(kind, region, region.center, r,
                          expand_boundary=not args.no_boundary_expansion)
    return pl, region


def _fmt_region(region: Region) -> str:
    ex = region.extent
    c = region.center
    return (f"{ex[0]:g} x {ex[1]:g} x {ex[2]:g} box at "
            f"({c.x:g}, {c.y:g}, {c.z:g})")


def _default_grid(region: Region, r: float) -> int:
    # sample pitch at most r/10 along the longest axis, corners included
    return int(math.ceil(float(np.max(region.extent)) * 10.0 / r)) + 1


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_plan(args) -> int:
    kind = StrategyKind.parse(args.strategy)
    r = float(args.r)
    region = _region_from_args(args, r)
    pl = enumerate_region(kind, region, region.center, r,
                          expand_boundary=not args.no_boundary_expansion)
    if args.format == "json":
        pl.to_json(args.out)
    else:
        pl.to_csv(args.out)
    ideal = region.volume / cell_geometry(kind, r).volume
    print(f"{kind.label}: {len(pl)} nodes over {_fmt_region(region)} "
          f"(theoretical minimum {ideal:.1f})")
    print(f"wrote {args.out}")
    if args.plot:
        from .plots import save_placement_figure  # matplotlib import is slow
        save_placement_figure(pl, region, args.plot)
        print(f"wrote {args.plot}")
    return 0


def cmd_verify(args) -> int:
    pl, region = _placement_for(args, need_region=True)
    r_sense = pl.r if args.sensing_r is None else _parse_length(args.sensing_r, pl.r)
    if args.samples is not None:
        spec = SamplingSpec("random", args.samples, args.rng_seed)
    else:
        res = args.grid if args.grid is not None else _default_grid(region, pl.r)
        spec = SamplingSpec("grid", res)
    report = verify_coverage(pl, region, spec, sensing_radius=r_sense)
    ok = report.coverage_fraction == 1.0
    status = "COVERED" if ok else "GAPS"
    wp = report.worst_point
    print(f"{status}: {report.covered}/{report.samples} samples within {r_sense:g} "
          f"of a node")
    print(f"worst sample distance {report.max_nearest_distance:.6g} at "
          f"({wp.x:.6g}, {wp.y:.6g}, {wp.z:.6g})")
    if args.out:
        _write_json(args.out, report.to_json_obj())
        print(f"wrote {args.out}")
    if args.plot:
        from .plots import save_coverage_figure  # matplotlib import is slow
        dists = nearest_distances(pl, sample_points(region, spec))
        save_coverage_figure(report, dists, r_sense, args.plot)
        print(f"wrote {args.plot}")
    return 0 if ok else 1


def cmd_compare(args) -> int:
    r = float(args.r)
    region = _region_from_args(args, r)
    expand = not args.no_boundary_expansion
    rows = []
    for kind in StrategyKind:
        pl = enumerate_region(kind, region, region.center, r, expand_boundary=expand)
        ranges = min_transmission_range(kind)
        rows.append({
            "strategy": kind.label,
            "code": kind.value,
            "volumetric_quotient": volumetric_quotient(kind),
            "tx_u": ranges.per_axis[0].distance,
            "tx_v": ranges.per_axis[1].distance,
            "tx_w": ranges.per_axis[2].distance,
            "tx_max": ranges.max_of_min,
            "node_count": len(pl),
            "theoretical": region.volume / cell_geometry(kind, r).volume,
        })
    best = min(rows, key=lambda row: row["theoretical"])
    for row in rows:
        row["pct_more_nodes_closed"] = 100.0 * (
            best["volumetric_quotient"] / row["volumetric_quotient"] - 1.0)
        row["pct_more_nodes_enumerated"] = 100.0 * (
            row["node_count"] / best["node_count"] - 1.0)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"comparison over {_fmt_region(region)}, R = {r:g}")
        print(f"{'strategy':<22} {'VQ':>8} {'tx_u/R':>8} {'tx_v/R':>8} "
              f"{'tx_w/R':>8} {'max/R':>8} {'nodes':>8} {'ideal':>10} {'vs best':>9}")
        for row in rows:
            print(f"{row['strategy']:<22} {row['volumetric_quotient']:>8.5f} "
                  f"{row['tx_u']:>8.4f} {row['tx_v']:>8.4f} {row['tx_w']:>8.4f} "
                  f"{row['tx_max']:>8.4f} {row['node_count']:>8d} "
                  f"{row['theoretical']:>10.1f} {row['pct_more_nodes_closed']:>8.1f}%")
    if args.out:
        _write_json(args.out, rows)
        print(f"wrote {args.out}")
    if args.plot:
        from .plots import save_compare_figure  # matplotlib import is slow
        save_compare_figure(rows, args.plot)
        print(f"wrote {args.plot}")
    return 0


def cmd_graph(args) -> int:
    pl, _ = _placement_for(args, need_region=False)
    r_tx = _parse_length(args.tx, pl.r)
    graph = build_graph(pl, r_tx)
    report = analyze(pl, r_tx)
    state = ("connected" if report.is_connected
             else f"{report.component_count} components")
    print(f"{len(pl)} nodes, {graph.edge_count} edges at r_tx {r_tx:g}: {state}")
    print(f"bottleneck range {report.bottleneck_range:.6g}; "
          f"all face links need {report.adjacency_complete_range:.6g}")
    _write_json(args.out, report.to_json_obj())
    print(f"wrote {args.out}")
    graph.to_edge_file(args.edges)
    print(f"wrote {args.edges}")
    if args.plot:
        from .plots import save_graph_figure  # matplotlib import is slow
        save_graph_figure(graph, report, args.plot)
        print(f"wrote {args.plot}")
    return 0 if report.is_connected else 1


def cmd_export_cells(args) -> int:
    pl, _ = _placement_for(args, need_region=False)
    cells = ((f"cell_u{u}_v{v}_w{w}", cell_mesh(pl.kind, pl.r, center=p))
             for (u, v, w), p in pl.nodes())
    write_obj(args.out, cells)
    print(f"wrote {args.out} ({len(pl)} cells)")
    return 0


def _add_region_args(p, required: bool) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--box", help="region extents X,Y,Z")
    g.add_argument("--span", type=float,
                   help="cube region, side = SPAN cube-cell edges (2R/sqrt(3) each)")
    p.add_argument("--center", default="0,0,0",
                   help="region center X,Y,Z (default 0,0,0); also the lattice seed")


def _add_source_args(p) -> None:
    p.add_argument("--strategy", help="cube | hp | rd | to (full names accepted)")
    p.add_argument("--r", type=float, help="sensing radius")
    p.add_argument("--nodes",
                   help="node list to load instead of generating (CSV needs "
                        "--strategy, --r and the original --center; JSON is "
                        "self-describing)")
    p.add_argument("--no-boundary-expansion", action="store_true",
                   help="when generating: clip to the box without widening "
                        "the candidate range by one cell first")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycover",
        description="Plan and analyze 3D sensor-node placements on "
                    "space-filling lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="generate a placement and write the node list")
    p.add_argument("--strategy", required=True, help="cube | hp | rd | to")
    p.add_argument("--r", type=float, required=True, help="sensing radius")
    _add_region_args(p, required=True)
    p.add_argument("--no-boundary-expansion", action="store_true",
                   help="clip to the box without widening the candidate "
                        "range by one cell first")
    p.add_argument("--out", default="nodes.csv",
                   help="node list path (default nodes.csv)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", help="also render a 3D scatter PNG to this path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="check full sensing coverage over a region")
    _add_source_args(p)
    _add_region_args(p, required=True)
    p.add_argument("--sensing-r",
                   help="radius to test against, e.g. 4.9 or 0.98R (default R)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", type=int,
                   help="per-axis grid resolution (default: pitch R/10)")
    g.add_argument("--samples", type=int, help="random samples instead of a grid")
    p.add_argument("--rng-seed", type=int, default=0,
                   help="seed for --samples (default 0)")
    p.add_argument("--out", help="write the coverage report JSON here")
    p.add_argument("--plot", help="render a nearest-distance histogram PNG")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare",
                       help="contrast the four strategies over one region")
    p.add_argument("--r", type=float, required=True, help="sensing radius")
    _add_region_args(p, required=True)
    p.add_argument("--no-boundary-expansion", action="store_true",
                   help="clip to the box without widening the candidate "
                        "range by one cell first")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="write the comparison rows as JSON")
    p.add_argument("--plot", help="render quotient and node-count bars PNG")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("graph",
                       help="build the communication graph and report connectivity")
    _add_source_args(p)
    _add_region_args(p, required=False)
    p.add_argument("--tx", required=True,
                   help="transmission radius, e.g. 8.5 or 1.7889R")
    p.add_argument("--out", default="graph.json",
                   help="connectivity report path (default graph.json)")
    p.add_argument("--edges", default="edges.txt",
                   help="edge list path, 'i j dist' lines (default edges.txt)")
    p.add_argument("--plot", help="render an edge-length histogram PNG")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("export-cells",
                       help="write the cell polyhedra as a Wavefront OBJ")
    _add_source_args(p)
    _add_region_args(p, required=False)
    p.add_argument("--out", default="cells.obj",
                   help="OBJ path (default cells.obj)")
    p.set_defaults(func=cmd_export_cells)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
