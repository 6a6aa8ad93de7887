import { bounds, lerp } from "./geometry.js";
import type { Graph, Point } from "./types.js";

const NODE_RADIUS = 8;
const ANIMATION_MS = 300;
const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphViewCallbacks {
  onNodeClick(id: string): void;
  onLasso(polygon: Point[]): void;
}

/** SVG node-link rendering with lasso selection and 300 ms transitions. */
export class GraphView {
  private readonly svg: SVGSVGElement;
  private readonly edgeLayer: SVGGElement;
  private readonly nodeLayer: SVGGElement;
  private readonly lassoPath: SVGPolylineElement;
  private graph: Graph | null = null;
  private shown: Record<string, Point> = {};
  private circles = new Map<string, SVGCircleElement>();
  private edgeLines: [string, string, SVGLineElement][] = [];
  private lasso: Point[] | null = null;
  private animation: number | null = null;

  constructor(container: HTMLElement, private readonly callbacks: GraphViewCallbacks) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.classList.add("graph-view");
    this.svg.setAttribute("viewBox", "0 0 512 512");
    this.edgeLayer = document.createElementNS(SVG_NS, "g");
    this.nodeLayer = document.createElementNS(SVG_NS, "g");
    this.lassoPath = document.createElementNS(SVG_NS, "polyline");
    this.lassoPath.setAttribute("class", "lasso");
    this.svg.append(this.edgeLayer, this.nodeLayer, this.lassoPath);
    container.appendChild(this.svg);

    this.svg.addEventListener("pointerdown", (e) => this.lassoStart(e));
    this.svg.addEventListener("pointermove", (e) => this.lassoMove(e));
    window.addEventListener("pointerup", () => this.lassoEnd());
  }

  private viewPoint(e: PointerEvent): Point {
    const rect = this.svg.getBoundingClientRect();
    const vb = this.svg.viewBox.baseVal;
    return [
      vb.x + ((e.clientX - rect.left) / rect.width) * vb.width,
      vb.y + ((e.clientY - rect.top) / rect.height) * vb.height,
    ];
  }

  private lassoStart(e: PointerEvent): void {
    if ((e.target as Element).tagName === "circle") return; // node click
    this.lasso = [this.viewPoint(e)];
  }

  private lassoMove(e: PointerEvent): void {
    if (!this.lasso) return;
    this.lasso.push(this.viewPoint(e));
    this.lassoPath.setAttribute(
      "points",
      this.lasso.map(([x, y]) => `${x},${y}`).join(" "),
    );
  }

  private lassoEnd(): void {
    if (!this.lasso) return;
    const polygon = this.lasso;
    this.lasso = null;
    this.lassoPath.setAttribute("points", "");
    if (polygon.length >= 3) this.callbacks.onLasso(polygon);
  }

  currentPositions(): Record<string, Point> {
    return { ...this.shown };
  }

  setGraph(graph: Graph, positions: Record<string, Point>): void {
    this.graph = graph;
    this.shown = { ...positions };
    this.rebuild();
    this.fitView();
  }

  private rebuild(): void {
    if (!this.graph) return;
    this.edgeLayer.replaceChildren();
    this.nodeLayer.replaceChildren();
    this.circles.clear();
    this.edgeLines = [];
    for (const [a, b] of this.graph.edges) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("class", "edge");
      this.edgeLayer.appendChild(line);
      this.edgeLines.push([a, b, line]);
    }
    for (const node of this.graph.nodes) {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("r", String(NODE_RADIUS));
      circle.setAttribute("class", "node");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = node; // label on hover
      circle.appendChild(title);
      circle.addEventListener("pointerdown", (e) => {
        e.stopPropagation();
        this.callbacks.onNodeClick(node);
      });
      this.nodeLayer.appendChild(circle);
      this.circles.set(node, circle);
    }
    this.paint();
  }

  private paint(): void {
    for (const [node, circle] of this.circles) {
      const p = this.shown[node];
      if (!p) continue;
      circle.setAttribute("cx", String(p[0]));
      circle.setAttribute("cy", String(p[1]));
    }
    for (const [a, b, line] of this.edgeLines) {
      const pa = this.shown[a];
      const pb = this.shown[b];
      if (!pa || !pb) continue;
      line.setAttribute("x1", String(pa[0]));
      line.setAttribute("y1", String(pa[1]));
      line.setAttribute("x2", String(pb[0]));
      line.setAttribute("y2", String(pb[1]));
    }
  }

  setSelection(selection: Set<string>): void {
    for (const [node, circle] of this.circles) {
      circle.classList.toggle("selected", selection.has(node));
    }
  }

  fitView(): void {
    const box = bounds(Object.values(this.shown), NODE_RADIUS * 3);
    if (!box) return;
    const w = Math.max(box.maxX - box.minX, 1);
    const h = Math.max(box.maxY - box.minY, 1);
    this.svg.setAttribute("viewBox", `${box.minX} ${box.minY} ${w} ${h}`);
  }

  /** Linear 300 ms interpolation from the shown to the target positions. */
  animateTo(target: Record<string, Point>, done?: () => void): void {
    if (this.animation !== null) cancelAnimationFrame(this.animation);
    const from = { ...this.shown };
    const start = performance.now();
    const step = (now: number) => {
      const t = Math.min(1, (now - start) / ANIMATION_MS);
      for (const node of Object.keys(target)) {
        const a = from[node] ?? target[node];
        this.shown[node] = lerp(a, target[node], t);
      }
      this.paint();
      if (t < 1) {
        this.animation = requestAnimationFrame(step);
      } else {
        this.animation = null;
        this.fitView();
        done?.();
      }
    };
    this.animation = requestAnimationFrame(step);
  }
}
