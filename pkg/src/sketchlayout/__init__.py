"""sketchlayout: sketch-guided force-directed graph layout.

Draw a shape, extract its skeleton as an ordered segment chain, map graph
nodes onto the segments, generate placement constraints and run a
constrained spring embedder so the drawing follows the sketch.
"""

from .constraints import ConstraintSet, Direction, RelativeConstraint, classify_direction, generate
from .errors import (
    DegenerateGraphError,
    InputFormatError,
    InvalidImageError,
    NotChainableError,
    NumericFailureError,
    SketchLayoutError,
)
from .layout import LayoutConfig, LayoutResult, constrained_layout, incremental_layout, polish
from .mapping import (
    CoreSubgraph,
    Graph,
    NodeLineMapping,
    accept_cycle,
    core_subgraph,
    distribute,
    graph_from_edge_list,
    graph_from_json,
    load_graph,
    longest_cycle_approx,
    two_pass_bfs,
)
from .pipeline import PipelineConfig, PipelineResult, run, run_incremental
from .polyline import SegmentChain, assemble_chain, simplify
from .raster import BinaryImage, binarize, thin, trace_skeleton

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "ConstraintSet",
    "CoreSubgraph",
    "DegenerateGraphError",
    "Direction",
    "Graph",
    "InputFormatError",
    "InvalidImageError",
    "LayoutConfig",
    "LayoutResult",
    "NodeLineMapping",
    "NotChainableError",
    "NumericFailureError",
    "PipelineConfig",
    "PipelineResult",
    "RelativeConstraint",
    "SegmentChain",
    "SketchLayoutError",
    "accept_cycle",
    "assemble_chain",
    "binarize",
    "classify_direction",
    "constrained_layout",
    "core_subgraph",
    "distribute",
    "generate",
    "graph_from_edge_list",
    "graph_from_json",
    "incremental_layout",
    "load_graph",
    "longest_cycle_approx",
    "polish",
    "run",
    "run_incremental",
    "simplify",
    "thin",
    "trace_skeleton",
    "two_pass_bfs",
]
