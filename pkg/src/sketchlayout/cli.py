"""Command line entry point.

    sketchlayout --graph g.json --sketch s.png [--out layout.json]
                 [--svg out.svg] [--report DIR] [--dump-chain chain.json]
                 [--dump-constraints c.json] [--select a,b,c --prior p.json]

Exit code 0 on success (fallback warnings go to stderr), nonzero on I/O or
validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import SketchLayoutError
from .layout import LayoutConfig
from .mapping import load_graph
from .pipeline import PipelineConfig, run, run_incremental
from .report import write_report
from .svgout import layout_to_svg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sketchlayout",
        description="Lay out a graph so it follows a hand-drawn sketch.",
    )
    p.add_argument("--graph", required=True, help="graph JSON or edge-list file")
    p.add_argument("--sketch", required=True, help="sketch image (PNG or PGM)")
    p.add_argument("--out", help="write layout JSON here (default: stdout)")
    p.add_argument("--svg", help="write an SVG rendering of the layout")
    p.add_argument("--report", metavar="DIR", help="write figures and positions.csv into DIR")
    p.add_argument("--dump-chain", help="write the extracted segment chain JSON")
    p.add_argument("--dump-constraints", help="write the generated constraints JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.2, help="slope threshold for direction classes")
    p.add_argument("--tolerance-pct", type=float, default=2.0,
                   help="simplification tolerance as %% of image diagonal")
    p.add_argument("--offset", type=float, default=5.0, help="chain joining threshold in px")
    p.add_argument("--tau-factor", type=float, default=2.0, help="cycle acceptance factor")
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--polish", type=int, default=30, help="polish iterations")
    p.add_argument("--threshold", type=int, default=128, help="binarization luminance threshold")
    p.add_argument("--invert", action="store_true", help="sketch is light on dark")
    p.add_argument("--chunk-size", type=int, default=10, help="tracing base region size in px")
    p.add_argument("--select", help="comma-separated node ids for incremental mode")
    p.add_argument("--prior", help="prior layout JSON for incremental mode")
    return p


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    layout = LayoutConfig(
        iterations=args.iterations,
        polish_iterations=args.polish,
        seed=args.seed,
    )
    return PipelineConfig(
        threshold=args.threshold,
        invert=args.invert,
        chunk_size=args.chunk_size,
        tolerance_pct=args.tolerance_pct,
        offset_threshold=args.offset,
        tau_factor=args.tau_factor,
        epsilon=args.epsilon,
        seed=args.seed,
        layout=layout,
    )


def _load_prior(path: str) -> dict[str, tuple[float, float]]:
    data = json.loads(Path(path).read_text())
    positions = data.get("positions", data)
    return {str(n): (float(xy[0]), float(xy[1])) for n, xy in positions.items()}


def _dump_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if (args.select is None) != (args.prior is None):
        print("error: --select and --prior must be given together", file=sys.stderr)
        return 2
    try:
        graph = load_graph(args.graph)
        cfg = _config_from_args(args)
        if args.select is not None:
            selection = [s for s in args.select.split(",") if s]
            prior = _load_prior(args.prior)
            result = run_incremental(graph, args.sketch, selection, prior, cfg)
        else:
            result = run(graph, args.sketch, cfg)
    except (SketchLayoutError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    _dump_json(args.out, result.to_json())
    if args.svg:
        Path(args.svg).write_text(layout_to_svg(graph, result.layout.positions))
    if args.dump_chain:
        payload = result.chain.to_json() if result.chain else {"closed": False, "points": []}
        _dump_json(args.dump_chain, payload)
    if args.dump_constraints:
        payload = result.constraints.to_json() if result.constraints else {}
        _dump_json(args.dump_constraints, payload)
    if args.report:
        write_report(
            args.report,
            graph,
            result.layout.positions,
            chain=result.chain,
            skeleton=result.skeleton,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
