"""Constrained spring embedder with projection, plus the polish pass.

Forces per iteration: logarithmic spring attraction along edges toward the
ideal edge length, pairwise repulsion falling off with the squared
distance, and a weak constant pull toward the barycenter.  Net displacement
is capped by a cooling step limit.  After the force step, relative
placement constraints are restored by moving the offending pair apart
along the constraint axis and alignment groups are relaxed toward their
mean; the projection sweeps repeat up to ten times per iteration.

Repulsion is exact all-pairs for small graphs; above ``GRID_THRESHOLD``
nodes interact only within a 3x3 neighborhood of a uniform grid whose cell
is twice the ideal edge length, which keeps large runs near-linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from .constraints import HORIZONTAL, VERTICAL, ConstraintSet
from .errors import NumericFailureError
from .mapping import Graph

SPRING_STRENGTH = 0.03
GRID_THRESHOLD = 500
PROJECTION_SWEEPS = 10
PIN_WEIGHT = 1e9
POLISH_DECAY = 0.8  # faster cooling keeps the polish drift "slight"


@dataclass(frozen=True)
class LayoutConfig:
    iterations: int = 500
    ideal_edge_length: float = 50.0
    repulsion_strength: float = 4500.0
    gravity_strength: float = 0.25
    min_gap: float = 40.0
    polish_iterations: int = 30
    max_step: Optional[float] = None  # defaults to ideal_edge_length / 2
    cooling: float = 0.99
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 0 or self.polish_iterations < 0:
            raise ValueError("iteration counts must be >= 0")
        if self.ideal_edge_length <= 0 or self.min_gap <= 0:
            raise ValueError("distances must be positive")
        if not (0 < self.cooling <= 1):
            raise ValueError("cooling must be in (0, 1]")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be positive")

    @property
    def step_limit(self) -> float:
        return self.max_step if self.max_step is not None else self.ideal_edge_length / 2.0


@dataclass
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    report: dict

    def to_json(self) -> dict:
        return {
            "positions": {n: [x, y] for n, (x, y) in self.positions.items()},
            "report": dict(self.report),
        }


class _AxisSystem:
    """One coordinate axis of the projection problem.

    Alignment groups sharing this coordinate collapse into a single
    variable (IPSep-style), so relative constraints and alignment are
    solved jointly instead of fighting each other across sweeps.
    """

    def __init__(
        self,
        axis: int,
        n: int,
        cons_first: np.ndarray,
        cons_second: np.ndarray,
        groups: list[np.ndarray],
        pinned: np.ndarray,
    ):
        self.axis = axis
        self.cons_first = cons_first
        self.cons_second = cons_second
        var_of = np.arange(n, dtype=np.int64)
        for g in groups:
            var_of[g] = g.min()
        # compress variable ids
        uniq, var_of = np.unique(var_of, return_inverse=True)
        self.var_of = var_of
        self.n_vars = len(uniq)
        self.counts = np.bincount(var_of, minlength=self.n_vars).astype(float)
        self.pin_counts = np.bincount(var_of[pinned], minlength=self.n_vars).astype(float)
        self.var_pinned = self.pin_counts > 0
        self.weights = np.where(self.var_pinned, PIN_WEIGHT, self.counts)
        self.free_nodes = np.nonzero(~pinned)[0]
        self.free_vars = var_of[self.free_nodes]
        vf = var_of[cons_first] if len(cons_first) else cons_first
        vs = var_of[cons_second] if len(cons_second) else cons_second
        keep = vf != vs  # a constraint within one group can never hold
        self.paths = _constraint_paths(vf[keep], vs[keep])

    def var_values(self, pos: np.ndarray, pinned: np.ndarray) -> np.ndarray:
        """Coordinate per variable: member mean; pinned members dominate."""
        coords = pos[:, self.axis]
        sums = np.bincount(self.var_of, weights=coords, minlength=self.n_vars)
        vals = sums / self.counts
        if self.var_pinned.any():
            pin_sums = np.bincount(
                self.var_of[pinned], weights=coords[pinned], minlength=self.n_vars
            )
            vals = np.where(self.var_pinned, pin_sums / np.maximum(self.pin_counts, 1.0), vals)
        return vals


class _Arrays:
    """Index-space view of the problem shared by all passes."""

    def __init__(self, graph: Graph, cs: ConstraintSet, pinned: Iterable[str]):
        self.nodes = sorted(graph.nodes)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        self.n = len(self.nodes)
        missing = [
            n
            for c in cs.relative
            for n in (c.first, c.second)
            if n not in self.index
        ]
        for group in cs.horizontal_alignments + cs.vertical_alignments:
            missing.extend(n for n in group if n not in self.index)
        if missing:
            raise ValueError(f"constraint references unknown nodes: {sorted(set(missing))[:5]}")
        self.edge_i = np.array([self.index[a] for a, _ in sorted(graph.edges)], dtype=np.int64)
        self.edge_j = np.array([self.index[b] for _, b in sorted(graph.edges)], dtype=np.int64)
        self.pinned = np.zeros(self.n, dtype=bool)
        for n in pinned:
            self.pinned[self.index[n]] = True

        rel = {
            HORIZONTAL: self._rel_arrays(cs, HORIZONTAL),
            VERTICAL: self._rel_arrays(cs, VERTICAL),
        }
        self.rel = {
            HORIZONTAL: (0, *rel[HORIZONTAL]),
            VERTICAL: (1, *rel[VERTICAL]),
        }
        # horizontal alignment shares y (coord 1); vertical shares x (coord 0)
        h_groups = [
            np.array([self.index[n] for n in g], dtype=np.int64)
            for g in cs.horizontal_alignments
        ]
        v_groups = [
            np.array([self.index[n] for n in g], dtype=np.int64)
            for g in cs.vertical_alignments
        ]
        self.groups = [(1, g) for g in h_groups] + [(0, g) for g in v_groups]
        self.systems = [
            _AxisSystem(0, self.n, *rel[HORIZONTAL], v_groups, self.pinned),
            _AxisSystem(1, self.n, *rel[VERTICAL], h_groups, self.pinned),
        ]

    def _rel_arrays(self, cs: ConstraintSet, which: str):
        firsts = [self.index[c.first] for c in cs.relative if c.axis == which]
        seconds = [self.index[c.second] for c in cs.relative if c.axis == which]
        return (
            np.array(firsts, dtype=np.int64),
            np.array(seconds, dtype=np.int64),
        )


def _constraint_paths(fi: np.ndarray, si: np.ndarray) -> list[np.ndarray]:
    """Cover the axis constraint DAG with edge-disjoint paths.

    Traversal-derived constraints give each node in/out degree at most one,
    so this usually yields a handful of long paths; BFS-tree branch points
    simply appear in several paths and are reconciled by repeated sweeps.
    """
    out_edges: dict[int, list[int]] = {}
    in_deg: dict[int, int] = {}
    for e, (a, b) in enumerate(zip(fi.tolist(), si.tolist())):
        out_edges.setdefault(a, []).append(e)
        in_deg[b] = in_deg.get(b, 0) + 1
        in_deg.setdefault(a, 0)
    for lst in out_edges.values():
        lst.sort(key=lambda e: si[e])
    used = np.zeros(len(fi), dtype=bool)
    cursor = {a: 0 for a in out_edges}

    def next_edge(node: int) -> int | None:
        lst = out_edges.get(node)
        if lst is None:
            return None
        k = cursor[node]
        while k < len(lst) and used[lst[k]]:
            k += 1
        cursor[node] = k
        return lst[k] if k < len(lst) else None

    paths: list[np.ndarray] = []
    starts = sorted(out_edges, key=lambda a: (in_deg[a] != 0, a))
    for start in starts:
        while True:
            e = next_edge(start)
            if e is None:
                break
            path = [start]
            node = start
            while e is not None:
                used[e] = True
                node = int(si[e])
                path.append(node)
                e = next_edge(node)
            paths.append(np.array(path, dtype=np.int64))
    return paths


def _pava(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted isotonic (non-decreasing) regression, classic block merge."""
    ys = y.tolist()
    ws = w.tolist()
    vals: list[float] = []
    wts: list[float] = []
    counts: list[int] = []
    for v, ww in zip(ys, ws):
        c = 1
        while vals and vals[-1] > v:
            pv, pw, pc = vals.pop(), wts.pop(), counts.pop()
            v = (pw * pv + ww * v) / (pw + ww)
            ww += pw
            c += pc
        vals.append(v)
        wts.append(ww)
        counts.append(c)
    out = np.empty(len(y))
    at = 0
    for v, c in zip(vals, counts):
        out[at : at + c] = v
        at += c
    return out


def _initial_positions(arrays: _Arrays, cfg: LayoutConfig, initial) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    radius = math.sqrt(max(arrays.n, 1)) * cfg.ideal_edge_length
    r = radius * np.sqrt(rng.random(arrays.n))
    theta = 2.0 * math.pi * rng.random(arrays.n)
    pos = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    if initial:
        for node, xy in initial.items():
            if node in arrays.index:
                pos[arrays.index[node]] = (float(xy[0]), float(xy[1]))
    return pos


def _scatter_pairs(disp: np.ndarray, i: np.ndarray, j: np.ndarray, vec: np.ndarray) -> None:
    """Add `vec` to disp[i] and subtract it from disp[j]."""
    n = len(disp)
    for ax in (0, 1):
        w = vec[:, ax]
        col = np.bincount(i, weights=w, minlength=n)
        col -= np.bincount(j, weights=w, minlength=n)
        disp[:, ax] += col


def _all_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(n, k=1)
    return i.astype(np.int64), j.astype(np.int64)


def _grid_pairs(pos: np.ndarray, cell: float) -> tuple[np.ndarray, np.ndarray]:
    """Pairs of nodes within the same or an adjacent grid cell."""
    cx = np.floor(pos[:, 0] / cell).astype(np.int64)
    cy = np.floor(pos[:, 1] / cell).astype(np.int64)
    cx -= cx.min()
    cy -= cy.min()
    stride = int(cx.max()) + 2  # keeps neighbor offsets collision-free
    key = cy * stride + cx
    order = np.argsort(key, kind="stable")
    skey = key[order]

    pi: list[np.ndarray] = []
    pj: list[np.ndarray] = []
    own = np.arange(len(key))
    for dx, dy in ((0, 0), (1, 0), (-1, 1), (0, 1), (1, 1)):
        target = skey + dy * stride + dx
        lo = np.searchsorted(skey, target, side="left")
        hi = np.searchsorted(skey, target, side="right")
        if dx == 0 and dy == 0:
            lo = own + 1  # only pairs further along the sorted run
        counts = hi - lo
        counts = np.maximum(counts, 0)
        total = int(counts.sum())
        if total == 0:
            continue
        starts = np.repeat(lo, counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        left = np.repeat(own, counts)
        pi.append(order[left])
        pj.append(order[starts + offsets])
    if not pi:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(pi), np.concatenate(pj)


def _force_step(
    pos: np.ndarray,
    arrays: _Arrays,
    cfg: LayoutConfig,
    limit: float,
    pair_cache: Optional[tuple[np.ndarray, np.ndarray]],
) -> None:
    # non-finite intermediates are tolerated here; the NaN guard after the
    # step turns them into a NumericFailureError
    with np.errstate(all="ignore"):
        _force_step_inner(pos, arrays, cfg, limit, pair_cache)


def _force_step_inner(
    pos: np.ndarray,
    arrays: _Arrays,
    cfg: LayoutConfig,
    limit: float,
    pair_cache: Optional[tuple[np.ndarray, np.ndarray]],
) -> None:
    n = arrays.n
    disp = np.zeros_like(pos)

    if n > 1:
        if pair_cache is not None:
            pi, pj = pair_cache
        else:
            pi, pj = _grid_pairs(pos, 2.0 * cfg.ideal_edge_length)
        if len(pi):
            d = pos[pi]
            d -= pos[pj]
            d2 = np.einsum("ij,ij->i", d, d)
            degenerate = d2 < 1e-4
            if degenerate.any():
                d[degenerate] = (1e-2, 0.0)  # deterministic nudge apart
                d2[degenerate] = 1e-4
            # force R/d2 along d/|d|: multiply d by R / d2^1.5
            w = cfg.repulsion_strength / (d2 * np.sqrt(d2))
            d *= w[:, None]
            _scatter_pairs(disp, pi, pj, d)

    if len(arrays.edge_i):
        d = pos[arrays.edge_j]
        d -= pos[arrays.edge_i]
        dist = np.sqrt(np.einsum("ij,ij->i", d, d))
        np.maximum(dist, 1e-3 * cfg.ideal_edge_length, out=dist)
        # log springs: zero at the ideal length, gentle on long edges
        w = SPRING_STRENGTH * cfg.ideal_edge_length * np.log(dist / cfg.ideal_edge_length) / dist
        d *= w[:, None]
        _scatter_pairs(disp, arrays.edge_i, arrays.edge_j, d)

    if cfg.gravity_strength > 0 and n > 1:
        d = pos.mean(axis=0) - pos
        dist = np.sqrt(np.einsum("ij,ij->i", d, d))
        w = cfg.gravity_strength / np.maximum(dist, 1e-9)
        disp += d * w[:, None]

    norms = np.einsum("ij,ij->i", disp, disp)
    np.sqrt(norms, out=norms)
    scale = np.minimum(1.0, limit / np.maximum(norms, 1e-12))
    disp *= scale[:, None]
    disp[arrays.pinned] = 0.0
    pos += disp


def _project_axis(pos: np.ndarray, system: _AxisSystem, pinned: np.ndarray, gap: float) -> bool:
    """One exact projection pass for one axis.

    Group variables take the mean of their members, constraint paths are
    restored by weighted isotonic regression (the two-variable case is the
    symmetric move-apart; pinned variables carry a huge weight and absorb
    nothing), then free members snap onto their variable.
    """
    axis = system.axis
    vals = system.var_values(pos, pinned)
    changed = bool(
        len(system.free_nodes)
        and np.abs(pos[system.free_nodes, axis] - vals[system.free_vars]).max() > 1e-9
    )

    for path in system.paths:
        x = vals[path]
        if (x[1:] - x[:-1] >= gap - 1e-9).all():
            continue
        changed = True
        offsets = gap * np.arange(len(path))
        fitted = _pava(x - offsets, system.weights[path]) + offsets
        vals[path] = np.where(system.var_pinned[path], vals[path], fitted)

    if changed:
        pos[system.free_nodes, axis] = vals[system.free_vars]
    return changed


def _project(pos: np.ndarray, arrays: _Arrays, cfg: LayoutConfig) -> None:
    for _ in range(PROJECTION_SWEEPS):
        violated = False
        for system in arrays.systems:
            if _project_axis(pos, system, arrays.pinned, cfg.min_gap):
                violated = True
        if not violated:
            break


def _check_finite(pos: np.ndarray) -> None:
    if not np.isfinite(pos).all():
        raise NumericFailureError("layout produced non-finite coordinates")


def _build_report(pos: np.ndarray, arrays: _Arrays, cs: ConstraintSet, cfg: LayoutConfig) -> dict:
    satisfied = 0
    total = 0
    for axis, fi, si in arrays.rel.values():
        total += len(fi)
        if len(fi):
            gap = pos[si, axis] - pos[fi, axis]
            satisfied += int((gap >= cfg.min_gap - 1.0).sum())
    max_dev = 0.0
    for coord, idx in arrays.groups:
        coords = pos[idx, coord]
        max_dev = max(max_dev, float(np.abs(coords - coords.mean()).max()))
    return {
        "relative_satisfied": satisfied,
        "relative_total": total,
        "alignment_max_deviation": max_dev,
        "dropped_constraints": cs.dropped,
    }


def _result(pos: np.ndarray, arrays: _Arrays, cs: ConstraintSet, cfg: LayoutConfig) -> LayoutResult:
    positions = {n: (float(pos[i, 0]), float(pos[i, 1])) for n, i in arrays.index.items()}
    return LayoutResult(positions, _build_report(pos, arrays, cs, cfg))


def constrained_layout(
    graph: Graph,
    cs: ConstraintSet,
    cfg: LayoutConfig,
    initial: Optional[Mapping[str, tuple[float, float]]] = None,
    pinned: Iterable[str] = (),
) -> LayoutResult:
    """Run the constrained force-directed phase.

    ``initial`` overrides the seeded disk initialization per node; nodes in
    ``pinned`` never move and absorb no projection correction.
    """
    if not graph.nodes:
        raise ValueError("graph has no nodes")
    arrays = _Arrays(graph, cs, pinned)
    pos = _initial_positions(arrays, cfg, initial)
    use_grid = arrays.n > GRID_THRESHOLD
    pair_cache = None if use_grid else (_all_pairs(arrays.n) if arrays.n > 1 else (np.empty(0, np.int64),) * 2)
    for t in range(cfg.iterations):
        limit = cfg.step_limit * cfg.cooling**t
        _force_step(pos, arrays, cfg, limit, pair_cache)
        _project(pos, arrays, cfg)
        _check_finite(pos)
    _project(pos, arrays, cfg)
    _check_finite(pos)
    return _result(pos, arrays, cs, cfg)


def polish(
    graph: Graph,
    start: LayoutResult,
    cfg: LayoutConfig,
    cs: Optional[ConstraintSet] = None,
    pinned: Iterable[str] = (),
) -> LayoutResult:
    """Short unconstrained pass from ``start`` with a tightened step cap.

    Steps are capped at a quarter of the ideal edge length so the sketched
    structure survives; the satisfaction report is recomputed against
    ``cs`` (pass the set used for the constrained phase to keep the report
    meaningful).
    """
    cs = cs if cs is not None else ConstraintSet.empty()
    arrays = _Arrays(graph, cs, pinned)
    missing = [n for n in arrays.nodes if n not in start.positions]
    if missing:
        raise ValueError(f"start positions missing nodes: {missing[:5]}")
    pos = np.array([start.positions[n] for n in arrays.nodes], dtype=float)
    use_grid = arrays.n > GRID_THRESHOLD
    pair_cache = None if use_grid else (_all_pairs(arrays.n) if arrays.n > 1 else (np.empty(0, np.int64),) * 2)
    cap = min(cfg.step_limit, cfg.ideal_edge_length / 4.0)
    for t in range(cfg.polish_iterations):
        limit = cap * POLISH_DECAY**t
        _force_step(pos, arrays, cfg, limit, pair_cache)
        _check_finite(pos)
    return _result(pos, arrays, cs, cfg)


def incremental_layout(
    graph: Graph,
    selection: Iterable[str],
    cs: ConstraintSet,
    prior: Mapping[str, tuple[float, float]],
    cfg: LayoutConfig,
) -> LayoutResult:
    """Re-layout ``selection`` with every other node pinned at ``prior``.

    The polish pass is followed by one more constraint projection: an
    incremental adjustment exists to impose the sketched structure on the
    selection, so the result must leave with its constraints intact.
    """
    selected = set(selection)
    unknown = selected - graph.nodes
    if unknown:
        raise ValueError(f"selection contains unknown nodes: {sorted(unknown)[:5]}")
    missing = [n for n in graph.nodes if n not in prior]
    if missing:
        raise ValueError(f"prior positions missing nodes: {sorted(missing)[:5]}")
    if not selected:
        arrays = _Arrays(graph, cs, ())
        pos = np.array([prior[n] for n in arrays.nodes], dtype=float)
        return _result(pos, arrays, cs, cfg)
    pinned = [n for n in graph.nodes if n not in selected]
    result = constrained_layout(graph, cs, cfg, initial=prior, pinned=pinned)
    result = polish(graph, result, cfg, cs=cs, pinned=pinned)
    arrays = _Arrays(graph, cs, pinned)
    pos = np.array([result.positions[n] for n in arrays.nodes], dtype=float)
    _project(pos, arrays, cfg)
    _check_finite(pos)
    return _result(pos, arrays, cs, cfg)
