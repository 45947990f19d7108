/** Pure view-state: loaded subgraph, node selection, one active highlight.
 *
 * Invariants kept by every transition:
 *   - selected nodes always exist in the loaded subgraph (max 2, oldest out);
 *   - exactly one highlight mode is active at a time;
 *   - every highlight mirrors an API payload verbatim — nothing is computed
 *     client-side.
 */
import type { CentralityPayload, GraphPayload, PathPayload } from "./types.js";

export type HighlightMode = "none" | "path" | "centrality" | "query";

export interface ViewState {
  /** what the canvas currently shows */
  graph: GraphPayload | null;
  /** the unfiltered view, for restoring after a query */
  fullGraph: GraphPayload | null;
  /** selected node ids, oldest first, length <= 2 */
  selection: number[];
  mode: HighlightMode;
  path: PathPayload | null;
  /** node_id -> closeness score, present only in centrality mode */
  centrality: Map<number, number> | null;
  /** the relation text behind the current query view */
  queryText: string | null;
  /** error banner; null when healthy */
  error: string | null;
  /** transient user notice (e.g. "no path"), cleared on the next action */
  notice: string | null;
}

export function initialState(): ViewState {
  return {
    graph: null,
    fullGraph: null,
    selection: [],
    mode: "none",
    path: null,
    centrality: null,
    queryText: null,
    error: null,
    notice: null,
  };
}

function clearHighlight(state: ViewState): ViewState {
  return { ...state, mode: "none", path: null, centrality: null, queryText: null, notice: null };
}

function pruneSelection(selection: number[], graph: GraphPayload | null): number[] {
  if (!graph) return [];
  const ids = new Set(graph.nodes.map((n) => n.id));
  return selection.filter((id) => ids.has(id));
}

/** Install a freshly loaded full graph; drops highlight and stale selection. */
export function loadGraph(state: ViewState, payload: GraphPayload): ViewState {
  const next = clearHighlight({ ...state, graph: payload, fullGraph: payload, error: null });
  return { ...next, selection: pruneSelection(state.selection, payload) };
}

/** Toggle membership; cap at two selected nodes by evicting the oldest. */
export function toggleSelect(state: ViewState, nodeId: number): ViewState {
  if (!state.graph || !state.graph.nodes.some((n) => n.id === nodeId)) {
    return state;
  }
  let selection: number[];
  if (state.selection.includes(nodeId)) {
    selection = state.selection.filter((id) => id !== nodeId);
  } else {
    selection = [...state.selection, nodeId].slice(-2);
  }
  return { ...state, selection, notice: null };
}

/** Pathfinding is offered only for an exact pair. */
export function canFindPath(state: ViewState): boolean {
  return state.selection.length === 2;
}

/** Show a path endpoint response; a miss becomes a notice, never a highlight. */
export function applyPath(state: ViewState, payload: PathPayload): ViewState {
  const base = clearHighlight(state);
  if (!payload.found) {
    return { ...base, notice: "no path between the selected nodes" };
  }
  return { ...base, mode: "path", path: payload };
}

/** Switch to centrality sizing from a centrality endpoint response. */
export function applyCentrality(state: ViewState, payload: CentralityPayload): ViewState {
  const base = clearHighlight(state);
  const table = new Map(payload.scores.map((s) => [s.node_id, s.score]));
  return { ...base, mode: "centrality", centrality: table };
}

/** Replace the view with a relation-query subgraph. */
export function applyQuery(
  state: ViewState,
  text: string,
  payload: GraphPayload,
): ViewState {
  const base = clearHighlight(state);
  const notice = payload.nodes.length === 0 ? `no relations match "${text}"` : null;
  return {
    ...base,
    mode: "query",
    queryText: text,
    graph: payload,
    selection: pruneSelection(state.selection, payload),
    notice,
  };
}

/** Back to the full view with no highlight. */
export function clearView(state: ViewState): ViewState {
  const graph = state.fullGraph;
  return {
    ...clearHighlight(state),
    graph,
    selection: pruneSelection(state.selection, graph),
  };
}

export function setError(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}

export function clearError(state: ViewState): ViewState {
  return { ...state, error: null };
}

export const MIN_RADIUS = 5;
export const MAX_RADIUS = 18;

/** Node radius: monotone in the API centrality score, constant otherwise. */
export function nodeRadius(state: ViewState, nodeId: number): number {
  if (state.mode !== "centrality" || !state.centrality || state.centrality.size === 0) {
    return MIN_RADIUS + 2;
  }
  const scores = [...state.centrality.values()];
  const lo = Math.min(...scores);
  const hi = Math.max(...scores);
  const score = state.centrality.get(nodeId) ?? lo;
  if (hi <= lo) {
    return (MIN_RADIUS + MAX_RADIUS) / 2;
  }
  return MIN_RADIUS + ((MAX_RADIUS - MIN_RADIUS) * (score - lo)) / (hi - lo);
}

/** Node ids the current highlight covers (path mode only). */
export function highlightedNodes(state: ViewState): Set<number> {
  return new Set(state.mode === "path" && state.path ? state.path.nodes : []);
}

/** Edge ids the current highlight covers (path mode only). */
export function highlightedEdges(state: ViewState): Set<number> {
  return new Set(state.mode === "path" && state.path ? state.path.edges : []);
}
