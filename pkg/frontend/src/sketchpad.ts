import type { ChainPayload } from "./types.js";

export const CANVAS_SIZE = 512;
export const STROKE_WIDTH = 8;
const ERASER_WIDTH = 24;

/** 512x512 freehand sketch canvas with pen, eraser and a chain overlay. */
export class SketchPad {
  readonly canvas: HTMLCanvasElement;
  private readonly ctx: CanvasRenderingContext2D;
  private readonly overlay: SVGSVGElement;
  private drawing = false;
  private last: [number, number] | null = null;
  mode: "draw" | "erase" = "draw";

  constructor(container: HTMLElement) {
    this.canvas = document.createElement("canvas");
    this.canvas.width = CANVAS_SIZE;
    this.canvas.height = CANVAS_SIZE;
    this.canvas.className = "sketch-canvas";
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
    container.appendChild(this.canvas);

    this.overlay = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.overlay.setAttribute("viewBox", `0 0 ${CANVAS_SIZE} ${CANVAS_SIZE}`);
    this.overlay.classList.add("chain-overlay");
    container.appendChild(this.overlay);

    this.clear();
    this.canvas.addEventListener("pointerdown", (e) => this.start(e));
    this.canvas.addEventListener("pointermove", (e) => this.move(e));
    window.addEventListener("pointerup", () => this.stop());
  }

  private pos(e: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return [
      ((e.clientX - rect.left) / rect.width) * CANVAS_SIZE,
      ((e.clientY - rect.top) / rect.height) * CANVAS_SIZE,
    ];
  }

  private start(e: PointerEvent): void {
    this.drawing = true;
    this.last = this.pos(e);
    this.segment(this.last, this.last);
  }

  private move(e: PointerEvent): void {
    if (!this.drawing || !this.last) return;
    const p = this.pos(e);
    this.segment(this.last, p);
    this.last = p;
  }

  private stop(): void {
    this.drawing = false;
    this.last = null;
  }

  private segment(a: [number, number], b: [number, number]): void {
    const ctx = this.ctx;
    ctx.strokeStyle = this.mode === "draw" ? "#000" : "#fff";
    ctx.lineWidth = this.mode === "draw" ? STROKE_WIDTH : ERASER_WIDTH;
    ctx.lineCap = "round";
    ctx.lineJoin = "round";
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
  }

  clear(): void {
    this.ctx.fillStyle = "#fff";
    this.ctx.fillRect(0, 0, CANVAS_SIZE, CANVAS_SIZE);
    this.setChain(null);
  }

  /** Base64 payload of the canvas PNG (no data: prefix). */
  toPngBase64(): string {
    return this.canvas.toDataURL("image/png").split(",", 2)[1];
  }

  setChain(chain: ChainPayload | null): void {
    while (this.overlay.firstChild) this.overlay.removeChild(this.overlay.firstChild);
    if (!chain || chain.points.length < 2) return;
    const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    poly.setAttribute(
      "points",
      chain.points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" "),
    );
    poly.setAttribute("class", "chain-line");
    this.overlay.appendChild(poly);
    for (const [x, y] of chain.points) {
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", x.toFixed(1));
      dot.setAttribute("cy", y.toFixed(1));
      dot.setAttribute("r", "4");
      dot.setAttribute("class", "chain-dot");
      this.overlay.appendChild(dot);
    }
  }
}
