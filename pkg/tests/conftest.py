"""Shared helpers: synthetic sketches and graph builders."""

from __future__ import annotations

import random

import pytest
from PIL import Image, ImageDraw

import sketchlayout as sl


def draw_rectangle_sketch(size=512, stroke=8, box=(100, 120, 412, 392)) -> Image.Image:
    img = Image.new("L", (size, size), 255)
    d = ImageDraw.Draw(img)
    d.rectangle(list(box), outline=0, width=stroke)
    return img


def draw_l_sketch(size=512, stroke=8) -> Image.Image:
    img = Image.new("L", (size, size), 255)
    d = ImageDraw.Draw(img)
    d.line([(120, 80), (120, 400)], fill=0, width=stroke)
    d.line([(120, 400), (420, 400)], fill=0, width=stroke)
    return img


def draw_line_sketch(size=512, stroke=8, horizontal=True) -> Image.Image:
    img = Image.new("L", (size, size), 255)
    d = ImageDraw.Draw(img)
    if horizontal:
        d.line([(40, size // 2), (size - 40, size // 2)], fill=0, width=stroke)
    else:
        d.line([(size // 2, 40), (size // 2, size - 40)], fill=0, width=stroke)
    return img


def draw_circle_sketch(size=512, stroke=8) -> Image.Image:
    img = Image.new("L", (size, size), 255)
    d = ImageDraw.Draw(img)
    d.ellipse([90, 90, 422, 422], outline=0, width=stroke)
    return img


def draw_diagonal_sketch(size=512, stroke=8) -> Image.Image:
    img = Image.new("L", (size, size), 255)
    d = ImageDraw.Draw(img)
    d.line([(60, 60), (452, 452)], fill=0, width=stroke)
    return img


def cycle_graph(n: int, prefix: str = "n") -> sl.Graph:
    nodes = [f"{prefix}{i:03d}" for i in range(n)]
    return sl.Graph.build(nodes, [(nodes[i], nodes[(i + 1) % n]) for i in range(n)])


def path_graph(n: int, prefix: str = "p") -> sl.Graph:
    nodes = [f"{prefix}{i:03d}" for i in range(n)]
    return sl.Graph.build(nodes, [(nodes[i], nodes[i + 1]) for i in range(n - 1)])


def grid_graph(k: int) -> sl.Graph:
    nodes = [f"g{i}_{j}" for i in range(k) for j in range(k)]
    edges = []
    for i in range(k):
        for j in range(k):
            if i + 1 < k:
                edges.append((f"g{i}_{j}", f"g{i + 1}_{j}"))
            if j + 1 < k:
                edges.append((f"g{i}_{j}", f"g{i}_{j + 1}"))
    return sl.Graph.build(nodes, edges)


def random_sparse_graph(n: int, extra_edges: int, seed: int) -> sl.Graph:
    """Random tree plus shortcut edges, Rome-benchmark flavored."""
    rng = random.Random(seed)
    nodes = [f"r{i:03d}" for i in range(n)]
    edges = [(nodes[i], nodes[rng.randrange(i)]) for i in range(1, n)]
    edges += [
        (nodes[rng.randrange(n)], nodes[rng.randrange(n)]) for _ in range(extra_edges)
    ]
    return sl.Graph.build(nodes, edges)


@pytest.fixture
def rectangle_sketch():
    return draw_rectangle_sketch()


@pytest.fixture
def l_sketch():
    return draw_l_sketch()
