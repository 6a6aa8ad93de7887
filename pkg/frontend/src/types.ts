export interface Graph {
  nodes: string[];
  edges: [string, string][];
}

export type Point = [number, number];

export interface LayoutReport {
  relative_satisfied: number;
  relative_total: number;
  alignment_max_deviation: number;
  dropped_constraints: number;
}

export interface ChainPayload {
  closed: boolean;
  points: Point[];
}

export interface LayoutResponse {
  positions: Record<string, Point>;
  report: LayoutReport;
  chain: ChainPayload | null;
  constraints: unknown;
  strategy: string;
  warnings: string[];
}

export type LayoutMode = "full" | "incremental";

export interface LayoutRequestBody {
  graph: Graph;
  sketch: string;
  config?: Record<string, number | boolean>;
  mode: LayoutMode;
  selection?: string[];
  prior?: Record<string, Point>;
}
