"""Simplification and chain assembly tests."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from sketchlayout.errors import NotChainableError
from sketchlayout.polyline import SegmentChain, assemble_chain, simplify


def seg_distance(p, a, b):
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    d = b - a
    den = float(d @ d)
    t = 0.0 if den < 1e-12 else max(0.0, min(1.0, float((p - a) @ d) / den))
    q = a + t * d
    return math.hypot(p[0] - q[0], p[1] - q[1])


def deviation_to_polyline(p, line):
    return min(seg_distance(p, a, b) for a, b in zip(line[:-1], line[1:]))


def is_subsequence(sub, full):
    it = iter(range(len(full)))
    for p in sub:
        for i in it:
            if np.array_equal(full[i], p):
                break
        else:
            return False
    return True


def random_polyline(rng: random.Random) -> np.ndarray:
    kind = rng.choice(["walk", "noisy-line", "arc"])
    n = rng.randint(2, 500)
    pts = []
    if kind == "walk":
        x, y = rng.uniform(0, 50), rng.uniform(0, 50)
        for _ in range(n):
            pts.append((x, y))
            x += rng.uniform(-3, 3)
            y += rng.uniform(-3, 3)
    elif kind == "noisy-line":
        x1, y1 = rng.uniform(0, 20), rng.uniform(0, 20)
        x2, y2 = rng.uniform(80, 200), rng.uniform(80, 200)
        for i in range(n):
            t = i / max(n - 1, 1)
            pts.append(
                (
                    x1 + t * (x2 - x1) + rng.uniform(-1, 1),
                    y1 + t * (y2 - y1) + rng.uniform(-1, 1),
                )
            )
    else:
        r = rng.uniform(20, 90)
        for i in range(n):
            a = 2.5 * math.pi * i / max(n - 1, 1)
            pts.append((r * math.cos(a) + rng.uniform(-0.5, 0.5),
                        r * math.sin(a) + rng.uniform(-0.5, 0.5)))
    # collapse exact duplicates so inputs stay valid polylines
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    if len(out) < 2:
        out.append((out[0][0] + 1.0, out[0][1]))
    return np.array(out, dtype=float)


# ---------------------------------------------------------------------------
# simplify
# ---------------------------------------------------------------------------


def test_simplify_collinear():
    line = np.array([(0, 0), (5, 0), (10, 0)], dtype=float)
    out = simplify(line, 1.0)
    assert out.tolist() == [[0, 0], [10, 0]]


def test_simplify_keeps_significant_point():
    line = np.array([(0, 0), (5, 4), (10, 0)], dtype=float)
    out = simplify(line, 1.0)
    assert out.tolist() == line.tolist()


def test_simplify_noisy_staircase():
    rng = random.Random(42)
    n = 100
    pts = []
    for i in range(n):
        x = 99 * i / (n - 1)
        y = 10 * x / 99 + rng.uniform(-0.5, 0.5)
        pts.append((x, y))
    pts[0] = (0.0, 0.0)
    pts[-1] = (99.0, 10.0)
    out = simplify(np.array(pts), 2.0)
    assert out.tolist() == [[0, 0], [99, 10]]
    for p in pts[1:-1]:
        assert deviation_to_polyline(p, out) <= 2.0


def test_simplify_rejects_bad_input():
    with pytest.raises(ValueError):
        simplify(np.array([(0.0, 0.0)]), 1.0)
    with pytest.raises(ValueError):
        simplify(np.array([(0.0, 0.0), (1.0, 1.0)]), 0.0)


def test_simplify_deviation_bound_random():
    rng = random.Random(7)
    for _ in range(40):
        line = random_polyline(rng)
        tol = rng.uniform(0.5, 8.0)
        out = simplify(line, tol)
        assert np.array_equal(out[0], line[0])
        assert np.array_equal(out[-1], line[-1])
        assert is_subsequence(out, line)
        kept = {tuple(p) for p in out}
        for p in line:
            if tuple(p) not in kept:
                assert deviation_to_polyline(p, out) <= tol + 1e-9


# ---------------------------------------------------------------------------
# assemble_chain
# ---------------------------------------------------------------------------


def square_sides(gap_jitter=True):
    a = np.array([(0, 0), (100, 0)], dtype=float)
    b = np.array([(101, 1), (101, 99)], dtype=float)
    c = np.array([(100, 101), (2, 101)], dtype=float)
    d = np.array([(0, 99), (0, 2)], dtype=float)
    return [a, b, c, d]


def test_single_polyline_chain():
    line = np.array([(0, 0), (10, 0), (10, 10)], dtype=float)
    chain = assemble_chain([line], 5.0)
    assert not chain.closed
    assert chain.points.tolist() == line.tolist()


def test_square_with_gaps_closes():
    chain = assemble_chain(square_sides(), 5.0)
    assert chain.closed
    assert chain.n_segments == 4
    assert np.array_equal(chain.points[0], chain.points[-1])


def test_far_apart_polylines_raise():
    a = np.array([(0, 0), (10, 0)], dtype=float)
    b = np.array([(200, 200), (210, 200)], dtype=float)
    with pytest.raises(NotChainableError):
        assemble_chain([a, b], 5.0)


def test_empty_input_raises():
    with pytest.raises(NotChainableError):
        assemble_chain([], 5.0)


def test_chain_shares_endpoints():
    chain = assemble_chain(square_sides(), 5.0)
    pts = chain.points
    for i in range(chain.n_segments - 1):
        assert np.array_equal(chain.segment(i)[1], chain.segment(i + 1)[0])
    assert chain.closed == bool(np.array_equal(pts[0], pts[-1]))


def test_permutation_invariance():
    rng = random.Random(3)
    base = assemble_chain(square_sides(), 5.0)

    def loop_points(chain: SegmentChain) -> list[tuple[float, float]]:
        pts = chain.points[:-1] if chain.closed else chain.points
        return [tuple(p) for p in pts]

    base_pts = loop_points(base)
    for _ in range(5):
        sides = square_sides()
        rng.shuffle(sides)
        other = assemble_chain(sides, 5.0)
        assert other.closed == base.closed
        other_pts = loop_points(other)
        # closed chains match up to rotation and traversal direction
        variants = []
        for r in range(len(other_pts)):
            rot = other_pts[r:] + other_pts[:r]
            variants.append(rot)
            variants.append(list(reversed(rot)))
        assert base_pts in variants


def test_middle_start_open_chain():
    # longest line sits in the middle; both ends must grow
    mid = np.array([(0, 0), (60, 0)], dtype=float)
    left = np.array([(-30, 1), (-1, 1)], dtype=float)
    right = np.array([(61, -1), (90, -1)], dtype=float)
    chain = assemble_chain([left, mid, right], 5.0)
    assert not chain.closed
    xs = chain.points[:, 0]
    assert xs.min() <= -29 and xs.max() >= 89


def test_chain_json_roundtrip():
    chain = assemble_chain(square_sides(), 5.0)
    again = SegmentChain.from_json(chain.to_json())
    assert again.closed == chain.closed
    assert np.allclose(again.points, chain.points)
