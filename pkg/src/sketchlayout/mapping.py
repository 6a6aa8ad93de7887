"""Node-line mapping: pick a traversal of the graph core and spread it
along the segment chain.

The core drops degree-1 nodes.  For closed chains a DFS heuristic looks for
a long cycle; otherwise (or when the cycle is too short) a two-pass BFS
produces the traversal.  ``distribute`` then allocates nodes to segments
proportionally to segment length using the largest-remainder rule.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DegenerateGraphError, InputFormatError
from .polyline import SegmentChain

DEFAULT_TAU_FACTOR = 2.0


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph over string node ids."""

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]  # normalized (a, b) with a < b

    @classmethod
    def build(cls, nodes: Iterable[str], edges: Iterable[Sequence[str]]) -> "Graph":
        node_set = frozenset(str(n) for n in nodes)
        norm = set()
        for pair in edges:
            if len(pair) != 2:
                raise InputFormatError(f"edge {pair!r} is not a pair")
            a, b = str(pair[0]), str(pair[1])
            if a == b:
                continue  # self-loops dropped
            if a not in node_set or b not in node_set:
                raise InputFormatError(f"edge ({a}, {b}) references unknown node")
            norm.add((a, b) if a < b else (b, a))
        return cls(node_set, frozenset(norm))

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for n in adj:
            adj[n].sort()
        return adj

    def degrees(self) -> dict[str, int]:
        deg = {n: 0 for n in self.nodes}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "edges": [[a, b] for a, b in sorted(self.edges)],
        }


@dataclass(frozen=True)
class CoreSubgraph:
    """Induced subgraph over nodes whose degree in the original graph is > 1."""

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for n in adj:
            adj[n].sort()
        return adj


@dataclass
class NodeLineMapping:
    """Segment index -> ordered node list, plus the traversal parent map."""

    assignments: list[tuple[int, list[str]]]
    parent: dict[str, Optional[str]] = field(default_factory=dict)

    def mapped_nodes(self) -> list[str]:
        out: list[str] = []
        for _, nodes in self.assignments:
            out.extend(nodes)
        return out

    def to_json(self) -> dict:
        return {
            "assignments": [
                {"segment": i, "nodes": list(nodes)} for i, nodes in self.assignments
            ],
            "parent": {v: p for v, p in self.parent.items()},
        }


# ---------------------------------------------------------------------------
# Graph input formats
# ---------------------------------------------------------------------------


def graph_from_json(data: dict) -> Graph:
    try:
        nodes = data["nodes"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise InputFormatError("graph JSON needs 'nodes' and 'edges'") from exc
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise InputFormatError("'nodes' and 'edges' must be lists")
    return Graph.build(nodes, edges)


def graph_from_edge_list(text: str) -> Graph:
    """Parse `a b` pairs, one per line; '#' starts a comment."""
    nodes: set[str] = set()
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputFormatError(f"line {lineno}: expected 'a b', got {raw!r}")
        nodes.update(parts)
        edges.append((parts[0], parts[1]))
    if not nodes:
        raise InputFormatError("edge list is empty")
    return Graph.build(nodes, edges)


def load_graph(path: str | Path) -> Graph:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"invalid graph JSON: {exc}") from exc
        return graph_from_json(data)
    return graph_from_edge_list(text)


# ---------------------------------------------------------------------------
# Core subgraph and traversals
# ---------------------------------------------------------------------------


def core_subgraph(g: Graph) -> CoreSubgraph:
    """Single filtering pass keeping nodes of original degree > 1."""
    if not g.nodes:
        raise DegenerateGraphError("empty graph")
    deg = g.degrees()
    keep = frozenset(n for n in g.nodes if deg[n] > 1)
    if not keep:
        raise DegenerateGraphError("no node has degree > 1")
    edges = frozenset((a, b) for a, b in g.edges if a in keep and b in keep)
    return CoreSubgraph(keep, edges)


def longest_cycle_approx(core: CoreSubgraph, seed: int = 0) -> Optional[list[str]]:
    """Longest cycle found by DFS from each not-yet-visited start.

    Starts are taken in ascending id order and any node visited by an
    earlier DFS is skipped as a future start, which keeps the total work
    near-linear.  A back edge to a node on the current stack yields the
    stack slice as a candidate; the longest candidate wins, first found on
    ties.  Candidate extraction is capped at 10*|V'| back edges.  ``seed``
    is accepted for interface symmetry; the search is order-determined.
    """
    del seed
    n = len(core.nodes)
    if n == 0:
        return None
    adj = core.adjacency()
    candidate_cap = 10 * n

    visited_global: set[str] = set()
    best: Optional[list[str]] = None
    candidates = 0

    for start in sorted(core.nodes):
        if start in visited_global or candidates >= candidate_cap:
            continue
        stack: list[tuple[str, Iterable[str]]] = [(start, iter(adj[start]))]
        pos = {start: 0}
        parent: dict[str, Optional[str]] = {start: None}
        visited_global.add(start)
        while stack and candidates < candidate_cap:
            u, it = stack[-1]
            descended = False
            for w in it:
                if w == parent[u]:
                    continue
                if w in pos:
                    candidates += 1
                    length = len(stack) - pos[w]
                    if best is None or length > len(best):
                        best = [node for node, _ in stack[pos[w]:]]
                    if candidates >= candidate_cap:
                        break
                elif w not in visited_global:
                    visited_global.add(w)
                    parent[w] = u
                    stack.append((w, iter(adj[w])))
                    pos[w] = len(stack) - 1
                    descended = True
                    break
            if not descended:
                node, _ = stack.pop()
                del pos[node]
    return best


def accept_cycle(cycle: Sequence[str], core_size: int, tau_factor: float = DEFAULT_TAU_FACTOR) -> bool:
    """True iff the cycle is long enough to represent the core structure."""
    if not cycle:
        raise ValueError("empty cycle")
    return len(cycle) >= tau_factor * math.sqrt(core_size)


def _bfs(adj: Mapping[str, list[str]], start: str) -> tuple[list[str], dict[str, Optional[str]], dict[str, int]]:
    order = [start]
    parent: dict[str, Optional[str]] = {start: None}
    dist = {start: 0}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                order.append(w)
    return order, parent, dist


def _largest_component(adj: Mapping[str, list[str]]) -> list[str]:
    seen: set[str] = set()
    best: list[str] = []
    for n in sorted(adj):
        if n in seen:
            continue
        comp, _, _ = _bfs(adj, n)
        seen.update(comp)
        if len(comp) > len(best):
            best = comp
    return sorted(best)


def two_pass_bfs(core: CoreSubgraph, seed: int = 0) -> tuple[list[str], dict[str, Optional[str]]]:
    """BFS twice: once to find a far node, again from it for the ordering.

    The start is drawn uniformly (seeded) from the largest connected
    component; nodes outside that component are not part of the result.
    """
    if not core.nodes:
        raise DegenerateGraphError("empty core")
    adj = core.adjacency()
    component = _largest_component(adj)
    rng = random.Random(seed)
    start = component[rng.randrange(len(component))]
    _, _, dist = _bfs(adj, start)
    far_dist = max(dist.values())
    v_far = min(n for n, d in dist.items() if d == far_dist)
    order, parent, _ = _bfs(adj, v_far)
    return order, parent


def distribute(
    order: Sequence[str],
    chain: SegmentChain,
    parent: Optional[Mapping[str, Optional[str]]] = None,
) -> NodeLineMapping:
    """Allocate traversal nodes to chain segments by segment length.

    Base counts are floor(d_i/D * len(order)); the remainder goes one node
    at a time to the segments with the largest fractional part, lower index
    first on ties.  Exact arithmetic keeps the floors faithful.  When no
    explicit ``parent`` map is given (the cycle strategy) each node's parent
    is its predecessor in ``order``, wrapping on closed chains.
    """
    if not order:
        raise ValueError("empty node order")
    m = len(order)
    lengths = [Fraction(float(d)) for d in chain.lengths()]
    total = sum(lengths)
    if total <= 0:
        raise ValueError("chain has zero length")
    shares = [d / total * m for d in lengths]
    base = [int(s) for s in shares]  # Fraction truncation == floor for s >= 0
    remainder = m - sum(base)
    by_fraction = sorted(
        range(len(shares)), key=lambda i: (-(shares[i] - base[i]), i)
    )
    counts = list(base)
    for i in by_fraction[:remainder]:
        counts[i] += 1

    assignments: list[tuple[int, list[str]]] = []
    cursor = 0
    for i, k in enumerate(counts):
        assignments.append((i, list(order[cursor : cursor + k])))
        cursor += k

    if parent is None:
        parent_map: dict[str, Optional[str]] = {}
        for j, v in enumerate(order):
            if j > 0:
                parent_map[v] = order[j - 1]
            elif chain.closed and m > 1:
                parent_map[v] = order[-1]
            else:
                parent_map[v] = None
    else:
        parent_map = {v: parent.get(v) for v in order}
    return NodeLineMapping(assignments, parent_map)
