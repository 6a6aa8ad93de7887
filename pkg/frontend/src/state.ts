import { pointInPolygon } from "./geometry.js";
import type { Graph, LayoutMode, LayoutResponse, Point } from "./types.js";

/**
 * Session state and its transitions, kept free of DOM concerns so the
 * update rules are unit-testable.  Invariants: the selection is always a
 * subset of the graph's nodes, and after any successful layout response
 * every node has a finite position.
 */
export class SessionState {
  graph: Graph | null = null;
  positions: Record<string, Point> = {};
  selection = new Set<string>();
  lastResponse: LayoutResponse | null = null;
  pending = false;
  error: string | null = null;

  loadGraph(graph: Graph): void {
    this.graph = graph;
    this.positions = {};
    this.selection.clear();
    this.lastResponse = null;
    this.error = null;
  }

  hasLayout(): boolean {
    return this.graph !== null && this.graph.nodes.every((n) => n in this.positions);
  }

  /** Returns a human-readable reason the request cannot be sent, or null. */
  validateRequest(mode: LayoutMode): string | null {
    if (!this.graph) return "load a graph first";
    if (this.pending) return "a layout request is already running";
    if (mode === "incremental") {
      if (!this.hasLayout()) return "run a full layout before incremental";
      if (this.selection.size === 0) return "select nodes for incremental layout";
    }
    return null;
  }

  applyResponse(response: LayoutResponse): void {
    if (!this.graph) throw new Error("no graph loaded");
    for (const node of this.graph.nodes) {
      const p = response.positions[node];
      if (!p || !Number.isFinite(p[0]) || !Number.isFinite(p[1])) {
        throw new Error(`response lacks a finite position for ${node}`);
      }
    }
    this.positions = response.positions;
    this.lastResponse = response;
    this.error = null;
  }

  /** A failed request never loses the prior layout. */
  applyFailure(message: string): void {
    this.error = message;
  }

  setSelectionFromLasso(polygon: Point[], viewPositions: Record<string, Point>): void {
    if (!this.graph) return;
    const picked = new Set<string>();
    for (const node of this.graph.nodes) {
      const p = viewPositions[node];
      if (p && pointInPolygon(p, polygon)) picked.add(node);
    }
    this.selection = picked;
  }

  toggleNode(id: string): void {
    if (!this.graph || !this.graph.nodes.includes(id)) return;
    if (this.selection.has(id)) {
      this.selection.delete(id);
    } else {
      this.selection.add(id);
    }
  }

  clearSelection(): void {
    this.selection.clear();
  }
}
