import { buildLayoutRequest, postLayout } from "./api.js";
import { GraphView } from "./graphview.js";
import { parseGraphText } from "./graphio.js";
import { SAMPLES } from "./samples.js";
import { SketchPad } from "./sketchpad.js";
import { SessionState } from "./state.js";
import type { LayoutMode } from "./types.js";

const state = new SessionState();

const sketchHost = document.getElementById("sketch-host")!;
const graphHost = document.getElementById("graph-host")!;
const statusBar = document.getElementById("status")!;
const sampleSelect = document.getElementById("sample") as HTMLSelectElement;
const fileInput = document.getElementById("graph-file") as HTMLInputElement;
const layoutButton = document.getElementById("layout") as HTMLButtonElement;
const incrementalButton = document.getElementById("incremental") as HTMLButtonElement;
const clearButton = document.getElementById("clear-sketch") as HTMLButtonElement;
const eraserToggle = document.getElementById("eraser") as HTMLInputElement;
const chainToggle = document.getElementById("show-chain") as HTMLInputElement;
const clearSelectionButton = document.getElementById("clear-selection") as HTMLButtonElement;

const pad = new SketchPad(sketchHost);
const view = new GraphView(graphHost, {
  onNodeClick(id) {
    state.toggleNode(id);
    view.setSelection(state.selection);
    showStatus();
  },
  onLasso(polygon) {
    state.setSelectionFromLasso(polygon, view.currentPositions());
    view.setSelection(state.selection);
    showStatus();
  },
});

function showStatus(extra?: string): void {
  const parts: string[] = [];
  if (extra) parts.push(extra);
  if (state.error) parts.push(`error: ${state.error}`);
  if (state.lastResponse) {
    const r = state.lastResponse;
    parts.push(`strategy: ${r.strategy}`);
    for (const w of r.warnings) parts.push(`warning: ${w}`);
  }
  if (state.selection.size) parts.push(`${state.selection.size} selected`);
  statusBar.textContent = parts.join(" | ") || "draw a sketch and press Layout";
  statusBar.classList.toggle("error", Boolean(state.error));
}

function setPending(pending: boolean): void {
  state.pending = pending;
  layoutButton.disabled = pending;
  incrementalButton.disabled = pending;
}

function scaleInitialPositions(): void {
  // before any layout, scatter nodes on a circle for something to look at
  if (!state.graph) return;
  const n = state.graph.nodes.length;
  const positions: Record<string, [number, number]> = {};
  state.graph.nodes.forEach((node, i) => {
    const a = (2 * Math.PI * i) / Math.max(n, 1);
    positions[node] = [256 + 200 * Math.cos(a), 256 + 200 * Math.sin(a)];
  });
  state.positions = positions;
  view.setGraph(state.graph, positions);
}

function loadSample(name: string): void {
  const make = SAMPLES[name];
  if (!make) return;
  state.loadGraph(make());
  scaleInitialPositions();
  view.setSelection(state.selection);
  showStatus(`loaded ${name}`);
}

async function requestLayout(mode: LayoutMode): Promise<void> {
  const problem = state.validateRequest(mode);
  if (problem) {
    state.applyFailure(problem);
    showStatus();
    return;
  }
  const body = buildLayoutRequest({
    graph: state.graph!,
    sketchBase64: pad.toPngBase64(),
    mode,
    selection: [...state.selection],
    prior: state.positions,
  });
  setPending(true);
  showStatus("laying out...");
  try {
    const response = await postLayout("", body);
    state.applyResponse(response);
    pad.setChain(chainToggle.checked ? response.chain : null);
    view.animateTo(response.positions);
    showStatus();
  } catch (err) {
    state.applyFailure(err instanceof Error ? err.message : String(err));
    showStatus();
  } finally {
    setPending(false);
  }
}

for (const name of Object.keys(SAMPLES)) {
  const option = document.createElement("option");
  option.value = name;
  option.textContent = name;
  sampleSelect.appendChild(option);
}
sampleSelect.addEventListener("change", () => loadSample(sampleSelect.value));

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  try {
    state.loadGraph(parseGraphText(await file.text()));
    scaleInitialPositions();
    showStatus(`loaded ${file.name}`);
  } catch (err) {
    state.applyFailure(err instanceof Error ? err.message : String(err));
    showStatus();
  }
});

layoutButton.addEventListener("click", () => void requestLayout("full"));
incrementalButton.addEventListener("click", () => void requestLayout("incremental"));
clearButton.addEventListener("click", () => pad.clear());
eraserToggle.addEventListener("change", () => {
  pad.mode = eraserToggle.checked ? "erase" : "draw";
});
chainToggle.addEventListener("change", () => {
  pad.setChain(chainToggle.checked ? state.lastResponse?.chain ?? null : null);
});
clearSelectionButton.addEventListener("click", () => {
  state.clearSelection();
  view.setSelection(state.selection);
  showStatus();
});

loadSample(Object.keys(SAMPLES)[0]);
sampleSelect.value = Object.keys(SAMPLES)[0];
showStatus();
