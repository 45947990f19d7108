/** Scene building (pure) and canvas drawing (DOM-facing, kept thin).
 *
 * buildScene turns state + layout positions into plain draw instructions so
 * tests can assert count parity with API payloads without a canvas.
 */
import type { ForceLayout } from "./layout.js";
import {
  ViewState,
  highlightedEdges,
  highlightedNodes,
  nodeRadius,
} from "./state.js";
import type { NodeRecord } from "./types.js";

export interface CircleOp {
  id: number;
  x: number;
  y: number;
  radius: number;
  color: string;
  highlighted: boolean;
  selected: boolean;
  label: string;
}

export interface LineOp {
  id: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  highlighted: boolean;
  label: string;
}

export interface Scene {
  circles: CircleOp[];
  lines: LineOp[];
}

const CLASS_COLORS: Record<string, string> = {
  PERSON: "#6ec6ff",
  ORGANIZATION: "#ffd54f",
  LOCATION: "#81c784",
  PLURAL: "#b39ddb",
  SINGULAR: "#90a4ae",
  AMBIGUOUS: "#f48fb1",
  UNKNOWN: "#cfd8dc",
};

export function classColor(entityClass: string): string {
  return CLASS_COLORS[entityClass] ?? CLASS_COLORS.UNKNOWN;
}

export function nodeTooltip(node: NodeRecord): string {
  const where = node.locations.length ? ` @ ${node.locations.join(", ")}` : "";
  return `${node.display} [${node.class}]${where}`;
}

/** Draw instructions for the current view; one circle per node, line per edge. */
export function buildScene(state: ViewState, layout: ForceLayout): Scene {
  const scene: Scene = { circles: [], lines: [] };
  if (!state.graph) {
    return scene;
  }
  const hotNodes = highlightedNodes(state);
  const hotEdges = highlightedEdges(state);
  const selected = new Set(state.selection);
  const positions = new Map(layout.nodes.map((n) => [n.id, n]));

  for (const edge of state.graph.edges) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    scene.lines.push({
      id: edge.id,
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      highlighted: hotEdges.has(edge.id),
      label: edge.label,
    });
  }
  for (const node of state.graph.nodes) {
    const p = positions.get(node.id);
    if (!p) continue;
    scene.circles.push({
      id: node.id,
      x: p.x,
      y: p.y,
      radius: nodeRadius(state, node.id),
      color: classColor(node.class),
      highlighted: hotNodes.has(node.id),
      selected: selected.has(node.id),
      label: node.display,
    });
  }
  return scene;
}

/** The circle under (x, y), topmost first; used for click selection. */
export function hitTest(scene: Scene, x: number, y: number): number | null {
  for (let i = scene.circles.length - 1; i >= 0; i--) {
    const c = scene.circles[i];
    const dx = x - c.x;
    const dy = y - c.y;
    if (dx * dx + dy * dy <= (c.radius + 2) * (c.radius + 2)) {
      return c.id;
    }
  }
  return null;
}

export function drawScene(ctx: CanvasRenderingContext2D, scene: Scene): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const line of scene.lines) {
    ctx.strokeStyle = line.highlighted ? "#ff7043" : "#546e7a";
    ctx.lineWidth = line.highlighted ? 3 : 1.2;
    ctx.beginPath();
    ctx.moveTo(line.x1, line.y1);
    ctx.lineTo(line.x2, line.y2);
    ctx.stroke();
    if (line.highlighted) {
      ctx.fillStyle = "#ffab91";
      ctx.font = "11px sans-serif";
      ctx.fillText(line.label, (line.x1 + line.x2) / 2 + 4, (line.y1 + line.y2) / 2 - 4);
    }
  }
  for (const c of scene.circles) {
    ctx.beginPath();
    ctx.arc(c.x, c.y, c.radius, 0, Math.PI * 2);
    ctx.fillStyle = c.color;
    ctx.fill();
    if (c.highlighted || c.selected) {
      ctx.strokeStyle = c.highlighted ? "#ff7043" : "#ffffff";
      ctx.lineWidth = c.highlighted ? 3 : 2;
      ctx.stroke();
    }
    ctx.fillStyle = "#eceff1";
    ctx.font = "11px sans-serif";
    ctx.fillText(c.label, c.x + c.radius + 3, c.y + 3);
  }
}
