/** Browser entry point: wires the API client, view state, layout and canvas. */
import { ApiClient, ApiError } from "./api.js";
import { ForceLayout } from "./layout.js";
import { buildScene, drawScene, hitTest, nodeTooltip } from "./render.js";
import {
  ViewState,
  applyCentrality,
  applyPath,
  applyQuery,
  canFindPath,
  clearView,
  initialState,
  loadGraph,
  setError,
  toggleSelect,
} from "./state.js";

const client = new ApiClient("");

let state: ViewState = initialState();
let layout = new ForceLayout([], []);
// bumped on every view change; in-flight requests from older views are aborted
let viewEpoch = 0;
let controller: AbortController | null = null;

const canvas = document.getElementById("graph") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const noticeBox = document.getElementById("notice")!;
const tooltip = document.getElementById("tooltip")!;
const legend = document.getElementById("legend")!;
const pathButton = document.getElementById("find-path") as HTMLButtonElement;
const centralityButton = document.getElementById("centrality") as HTMLButtonElement;
const queryInput = document.getElementById("query-text") as HTMLInputElement;
const queryButton = document.getElementById("run-query") as HTMLButtonElement;
const clearButton = document.getElementById("clear-view") as HTMLButtonElement;
const statusBox = document.getElementById("status")!;

function nextSignal(): AbortSignal {
  viewEpoch += 1;
  controller?.abort();
  controller = new AbortController();
  return controller.signal;
}

function setState(next: ViewState, rebuildLayout: boolean): void {
  const graphChanged = rebuildLayout && next.graph !== state.graph;
  state = next;
  if (graphChanged && state.graph) {
    layout = new ForceLayout(
      state.graph.nodes.map((n) => n.id),
      state.graph.edges.map((e) => ({ source: e.source, target: e.target })),
      { width: canvas.width, height: canvas.height },
    );
  }
  syncControls();
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.body.code}: ${err.body.message}`;
  }
  if (err instanceof DOMException && err.name === "AbortError") {
    return "";
  }
  return "service unreachable — is the API running?";
}

function syncControls(): void {
  banner.textContent = state.error ?? "";
  banner.style.display = state.error ? "block" : "none";
  noticeBox.textContent = state.notice ?? "";
  noticeBox.style.display = state.notice ? "block" : "none";
  pathButton.disabled = !canFindPath(state);
  const total = state.fullGraph?.node_total ?? 0;
  statusBox.textContent = state.graph
    ? `${state.graph.nodes.length}/${total} nodes, ${state.graph.edges.length} edges · ` +
      `${state.selection.length} selected · mode: ${state.mode}`
    : "no graph loaded";
  if (state.mode === "centrality" && state.centrality) {
    const top = [...state.centrality.entries()]
      .sort((a, b) => b[1] - a[1] || a[0] - b[0])
      .slice(0, 5)
      .map(([id, score]) => {
        const node = state.graph?.nodes.find((n) => n.id === id);
        return `<li>${node?.display ?? id} — ${score.toFixed(4)}</li>`;
      })
      .join("");
    legend.innerHTML = `<strong>top closeness</strong><ol>${top}</ol>`;
    legend.style.display = "block";
  } else {
    legend.style.display = "none";
  }
}

async function reloadGraph(): Promise<void> {
  const signal = nextSignal();
  const epoch = viewEpoch;
  try {
    const payload = await client.graph(500, 0, signal);
    if (epoch !== viewEpoch) return;
    setState(loadGraph(state, payload), true);
  } catch (err) {
    const message = describeError(err);
    if (message) setState(setError(state, message), false);
  }
}

pathButton.addEventListener("click", async () => {
  if (!canFindPath(state)) return;
  const [a, b] = state.selection;
  const signal = nextSignal();
  const epoch = viewEpoch;
  try {
    const payload = await client.path(String(a), String(b), false, signal);
    if (epoch !== viewEpoch) return;
    setState(applyPath(state, payload), false);
  } catch (err) {
    const message = describeError(err);
    if (message) setState(setError(state, message), false);
  }
});

centralityButton.addEventListener("click", async () => {
  const signal = nextSignal();
  const epoch = viewEpoch;
  try {
    const payload = await client.centrality(undefined, signal);
    if (epoch !== viewEpoch) return;
    setState(applyCentrality(state, payload), false);
  } catch (err) {
    const message = describeError(err);
    if (message) setState(setError(state, message), false);
  }
});

queryButton.addEventListener("click", async () => {
  const text = queryInput.value.trim();
  if (!text) return;
  const signal = nextSignal();
  const epoch = viewEpoch;
  try {
    const payload = await client.query(text, signal);
    if (epoch !== viewEpoch) return;
    setState(applyQuery(state, text, payload), true);
  } catch (err) {
    const message = describeError(err);
    if (message) setState(setError(state, message), false);
  }
});

clearButton.addEventListener("click", () => {
  nextSignal();
  queryInput.value = "";
  setState(clearView(state), true);
});

canvas.addEventListener("click", (event) => {
  const rect = canvas.getBoundingClientRect();
  const scene = buildScene(state, layout);
  const id = hitTest(scene, event.clientX - rect.left, event.clientY - rect.top);
  if (id !== null) {
    setState(toggleSelect(state, id), false);
  }
});

canvas.addEventListener("mousemove", (event) => {
  const rect = canvas.getBoundingClientRect();
  const scene = buildScene(state, layout);
  const id = hitTest(scene, event.clientX - rect.left, event.clientY - rect.top);
  const node = id === null ? undefined : state.graph?.nodes.find((n) => n.id === id);
  if (node) {
    tooltip.textContent = nodeTooltip(node);
    tooltip.style.display = "block";
    tooltip.style.left = `${event.clientX + 12}px`;
    tooltip.style.top = `${event.clientY + 12}px`;
  } else {
    tooltip.style.display = "none";
  }
});

function frame(): void {
  if (!layout.isQuiescent()) {
    layout.step();
  }
  drawScene(ctx, buildScene(state, layout));
  requestAnimationFrame(frame);
}

void reloadGraph().then(() => requestAnimationFrame(frame));
