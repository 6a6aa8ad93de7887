import { describe, expect, it } from "vitest";

import { SAMPLES, binaryTree, cycleGraph, gridGraph, romeLikeGraph } from "../src/samples.js";

function degreeMap(edges: [string, string][]): Map<string, number> {
  const deg = new Map<string, number>();
  for (const [a, b] of edges) {
    deg.set(a, (deg.get(a) ?? 0) + 1);
    deg.set(b, (deg.get(b) ?? 0) + 1);
  }
  return deg;
}

function isConnected(nodes: string[], edges: [string, string][]): boolean {
  const adj = new Map<string, string[]>(nodes.map((n) => [n, []]));
  for (const [a, b] of edges) {
    adj.get(a)!.push(b);
    adj.get(b)!.push(a);
  }
  const seen = new Set([nodes[0]]);
  const stack = [nodes[0]];
  while (stack.length) {
    for (const w of adj.get(stack.pop()!)!) {
      if (!seen.has(w)) {
        seen.add(w);
        stack.push(w);
      }
    }
  }
  return seen.size === nodes.length;
}

describe("sample graphs", () => {
  it("cycle has n nodes, n edges, all degree 2", () => {
    const g = cycleGraph(24);
    expect(g.nodes.length).toBe(24);
    expect(g.edges.length).toBe(24);
    for (const d of degreeMap(g.edges).values()) expect(d).toBe(2);
  });

  it("binary tree has n-1 edges and is connected", () => {
    const g = binaryTree(5);
    expect(g.nodes.length).toBe(31);
    expect(g.edges.length).toBe(30);
    expect(isConnected(g.nodes, g.edges)).toBe(true);
  });

  it("grid has k^2 nodes and 2k(k-1) edges", () => {
    const g = gridGraph(6);
    expect(g.nodes.length).toBe(36);
    expect(g.edges.length).toBe(60);
  });

  it("rome-like graph is connected and deterministic", () => {
    const a = romeLikeGraph(60, 7);
    const b = romeLikeGraph(60, 7);
    expect(a).toEqual(b);
    expect(isConnected(a.nodes, a.edges)).toBe(true);
    expect(a.edges.length).toBeGreaterThanOrEqual(59);
  });

  it("every bundled sample builds", () => {
    for (const make of Object.values(SAMPLES)) {
      const g = make();
      expect(g.nodes.length).toBeGreaterThan(0);
      expect(isConnected(g.nodes, g.edges)).toBe(true);
    }
  });
});
