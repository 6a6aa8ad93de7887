"""End-to-end orchestration of the four stages.

binarize -> thin -> trace -> simplify -> assemble chain, then map the graph
core onto the chain (cycle strategy for closed chains, two-pass BFS
otherwise), generate constraints and run the constrained layout plus the
polish pass.  Degenerate inputs (blank or branching sketches, cores with no
degree>1 node) fall back to an unconstrained layout with a warning instead
of failing: the tool should always produce a drawable result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from . import constraints as constraints_mod
from . import mapping as mapping_mod
from . import polyline as polyline_mod
from . import raster as raster_mod
from .constraints import ConstraintSet
from .errors import DegenerateGraphError, NotChainableError
from .layout import LayoutConfig, LayoutResult, constrained_layout, incremental_layout, polish
from .mapping import Graph, NodeLineMapping
from .polyline import SegmentChain
from .raster import BinaryImage, ImageLike

STRATEGY_CYCLE = "cycle"
STRATEGY_BFS = "bfs"
STRATEGY_NONE = "none"


@dataclass(frozen=True)
class PipelineConfig:
    threshold: int = raster_mod.DEFAULT_THRESHOLD
    invert: bool = False
    chunk_size: int = raster_mod.DEFAULT_CHUNK_SIZE
    tolerance_pct: float = 2.0  # simplification tolerance, % of image diagonal
    offset_threshold: float = polyline_mod.DEFAULT_OFFSET_THRESHOLD
    tau_factor: float = mapping_mod.DEFAULT_TAU_FACTOR
    epsilon: float = constraints_mod.DEFAULT_EPSILON
    seed: int = 0
    layout: LayoutConfig = field(default_factory=LayoutConfig)

    def __post_init__(self) -> None:
        if self.tolerance_pct <= 0:
            raise ValueError("tolerance_pct must be positive")
        if self.offset_threshold < 0:
            raise ValueError("offset_threshold must be >= 0")
        # one seed drives the whole run
        if self.layout.seed != self.seed:
            object.__setattr__(self, "layout", replace(self.layout, seed=self.seed))


@dataclass
class PipelineResult:
    layout: LayoutResult
    chain: Optional[SegmentChain]
    mapping: Optional[NodeLineMapping]
    constraints: Optional[ConstraintSet]
    strategy: str
    warnings: list[str]
    skeleton: Optional[BinaryImage] = None
    constrained: Optional[LayoutResult] = None  # state before the polish pass

    def to_json(self) -> dict:
        data = self.layout.to_json()
        data["strategy"] = self.strategy
        data["warnings"] = list(self.warnings)
        return data


def extract_chain(sketch: ImageLike, cfg: PipelineConfig) -> tuple[SegmentChain, BinaryImage]:
    """Sketch image -> (segment chain, thinned skeleton)."""
    binary = raster_mod.binarize(sketch, cfg.threshold, cfg.invert)
    skeleton = raster_mod.thin(binary)
    traced = raster_mod.trace_skeleton(skeleton, cfg.chunk_size)
    if not traced:
        raise NotChainableError("sketch has no traceable strokes")
    diagonal = math.hypot(binary.width, binary.height)
    tolerance = max(1.0, cfg.tolerance_pct / 100.0 * diagonal)
    simplified = [polyline_mod.simplify(line, tolerance) for line in traced]
    chain = polyline_mod.assemble_chain(simplified, cfg.offset_threshold)
    return chain, skeleton


def map_nodes(
    graph: Graph,
    chain: SegmentChain,
    cfg: PipelineConfig,
    core: Optional[mapping_mod.CoreSubgraph] = None,
) -> tuple[NodeLineMapping, str]:
    """Choose the traversal strategy and distribute nodes over the chain."""
    if core is None:
        core = mapping_mod.core_subgraph(graph)
    if chain.closed:
        cycle = mapping_mod.longest_cycle_approx(core, cfg.seed)
        if cycle is not None and mapping_mod.accept_cycle(cycle, len(core.nodes), cfg.tau_factor):
            return mapping_mod.distribute(cycle, chain), STRATEGY_CYCLE
    order, parents = mapping_mod.two_pass_bfs(core, cfg.seed)
    return mapping_mod.distribute(order, chain, parents), STRATEGY_BFS


def _selection_core(graph: Graph, selected: list[str]) -> mapping_mod.CoreSubgraph:
    """Core of the selection, filtering by degree in the FULL graph.

    A lassoed arc of a cycle would otherwise lose its two end nodes, which
    still have degree 2 in the graph the user is looking at.
    """
    deg = graph.degrees()
    keep = frozenset(n for n in selected if deg[n] > 1)
    if not keep:
        raise DegenerateGraphError("no selected node has degree > 1")
    edges = frozenset(
        (a, b) for a, b in graph.edges if a in keep and b in keep
    )
    return mapping_mod.CoreSubgraph(keep, edges)


def run(graph: Graph, sketch: ImageLike, cfg: Optional[PipelineConfig] = None) -> PipelineResult:
    """Full pipeline: layout the whole graph guided by the sketch."""
    cfg = cfg or PipelineConfig()
    warnings: list[str] = []
    chain: Optional[SegmentChain] = None
    skeleton: Optional[BinaryImage] = None
    node_map: Optional[NodeLineMapping] = None
    cs = ConstraintSet.empty()
    strategy = STRATEGY_NONE

    try:
        chain, skeleton = extract_chain(sketch, cfg)
    except NotChainableError as exc:
        warnings.append(f"sketch not chainable: {exc}; using unconstrained layout")

    if chain is not None:
        try:
            node_map, strategy = map_nodes(graph, chain, cfg)
            cs = constraints_mod.generate(node_map, chain, cfg.epsilon)
        except DegenerateGraphError as exc:
            warnings.append(f"degenerate graph: {exc}; using unconstrained layout")
            node_map = None
            strategy = STRATEGY_NONE

    constrained = constrained_layout(graph, cs, cfg.layout)
    result = polish(graph, constrained, cfg.layout, cs=cs)
    return PipelineResult(
        result, chain, node_map, cs, strategy, warnings, skeleton, constrained
    )


def run_incremental(
    graph: Graph,
    sketch: ImageLike,
    selection: Iterable[str],
    prior: Mapping[str, tuple[float, float]],
    cfg: Optional[PipelineConfig] = None,
) -> PipelineResult:
    """Re-layout only ``selection``, guided by the sketch, others pinned.

    The chain is mapped onto the subgraph induced by the selection; the
    generated constraints therefore only involve selected nodes.
    """
    cfg = cfg or PipelineConfig()
    selected = [n for n in sorted(set(selection)) if n in graph.nodes]
    unknown = set(selection) - graph.nodes
    if unknown:
        raise ValueError(f"selection contains unknown nodes: {sorted(unknown)[:5]}")
    warnings: list[str] = []
    chain: Optional[SegmentChain] = None
    skeleton: Optional[BinaryImage] = None
    node_map: Optional[NodeLineMapping] = None
    cs = ConstraintSet.empty()
    strategy = STRATEGY_NONE

    if not selected:
        result = incremental_layout(graph, [], cs, prior, cfg.layout)
        return PipelineResult(result, None, None, cs, STRATEGY_NONE, warnings, None)

    try:
        chain, skeleton = extract_chain(sketch, cfg)
    except NotChainableError as exc:
        warnings.append(f"sketch not chainable: {exc}; using unconstrained layout")

    if chain is not None:
        try:
            core = _selection_core(graph, selected)
            node_map, strategy = map_nodes(graph, chain, cfg, core=core)
            cs = constraints_mod.generate(node_map, chain, cfg.epsilon)
        except DegenerateGraphError as exc:
            warnings.append(f"degenerate selection: {exc}; using unconstrained layout")
            node_map = None
            strategy = STRATEGY_NONE

    result = incremental_layout(graph, selected, cs, prior, cfg.layout)
    return PipelineResult(result, chain, node_map, cs, strategy, warnings, skeleton)
