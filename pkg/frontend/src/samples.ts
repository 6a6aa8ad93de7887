import { normalizeGraph } from "./graphio.js";
import type { Graph } from "./types.js";

export function cycleGraph(n: number): Graph {
  const nodes = Array.from({ length: n }, (_, i) => `n${String(i).padStart(2, "0")}`);
  const edges = nodes.map((a, i) => [a, nodes[(i + 1) % n]] as [string, string]);
  return normalizeGraph(nodes, edges);
}

export function binaryTree(depth: number): Graph {
  const count = 2 ** depth - 1;
  const nodes = Array.from({ length: count }, (_, i) => `t${String(i).padStart(2, "0")}`);
  const edges: [string, string][] = [];
  for (let i = 0; 2 * i + 1 < count; i++) {
    edges.push([nodes[i], nodes[2 * i + 1]]);
    if (2 * i + 2 < count) edges.push([nodes[i], nodes[2 * i + 2]]);
  }
  return normalizeGraph(nodes, edges);
}

export function gridGraph(k: number): Graph {
  const nodes: string[] = [];
  const edges: [string, string][] = [];
  const id = (i: number, j: number) => `g${i}_${j}`;
  for (let i = 0; i < k; i++) {
    for (let j = 0; j < k; j++) {
      nodes.push(id(i, j));
      if (i + 1 < k) edges.push([id(i, j), id(i + 1, j)]);
      if (j + 1 < k) edges.push([id(i, j), id(i, j + 1)]);
    }
  }
  return normalizeGraph(nodes, edges);
}

/** Deterministic LCG so the sample is identical on every load. */
function lcg(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 2 ** 32;
  };
}

/** Sparse connected graph in the spirit of the Rome benchmark set. */
export function romeLikeGraph(n: number, seed = 7): Graph {
  const rand = lcg(seed);
  const nodes = Array.from({ length: n }, (_, i) => `r${String(i).padStart(2, "0")}`);
  const edges: [string, string][] = [];
  for (let i = 1; i < n; i++) {
    edges.push([nodes[i], nodes[Math.floor(rand() * i)]]);
  }
  const extras = Math.floor(n * 0.3);
  for (let e = 0; e < extras; e++) {
    const a = Math.floor(rand() * n);
    const b = Math.floor(rand() * n);
    if (a !== b) edges.push([nodes[a], nodes[b]]);
  }
  return normalizeGraph(nodes, edges);
}

export const SAMPLES: Record<string, () => Graph> = {
  "cycle (24)": () => cycleGraph(24),
  "tree (31)": () => binaryTree(5),
  "grid (6x6)": () => gridGraph(6),
  "rome-like (60)": () => romeLikeGraph(60),
};
