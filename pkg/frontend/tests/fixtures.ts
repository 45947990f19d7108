/** Service responses recorded verbatim from a live run over the bundled
 * two-document demo corpus. Tests assert the UI mirrors these payloads
 * exactly — the single-source-of-truth invariant.
 */
import type { CentralityPayload, ErrorBody, GraphPayload, PathPayload } from "../src/types.js";

export const DEMO_GRAPH: GraphPayload = {
  nodes: [
    { id: 0, canonical: "bunker", display: "the bunker", class: "UNKNOWN", locations: ["baghdad"], mentions: 1 },
    { id: 1, canonical: "eastern baghdad", display: "eastern Baghdad", class: "LOCATION", locations: ["baghdad"], mentions: 1 },
    { id: 2, canonical: "group of soldiers", display: "The group of soldiers", class: "UNKNOWN", locations: ["baghdad"], mentions: 2 },
    { id: 3, canonical: "john", display: "John", class: "PERSON", locations: ["baghdad", "eastern baghdad"], mentions: 1 },
    { id: 4, canonical: "men", display: "The men", class: "UNKNOWN", locations: ["baghdad"], mentions: 1 },
    { id: 5, canonical: "their leader", display: "their leader", class: "UNKNOWN", locations: ["baghdad"], mentions: 1 },
    { id: 6, canonical: "this morning", display: "this morning", class: "UNKNOWN", locations: ["baghdad"], mentions: 1 },
  ],
  edges: [
    { id: 0, source: 2, target: 0, label: "left", tokens: ["left"], location: "baghdad", provenance: [["demo-001", 0, 0]] },
    { id: 1, source: 2, target: 6, label: "returned", tokens: ["return"], location: "baghdad", provenance: [["demo-001", 1, 0]] },
    { id: 2, source: 3, target: 1, label: "traveled to", tokens: ["travel", "to"], location: "baghdad", provenance: [["demo-002", 1, 0]] },
    { id: 3, source: 4, target: 5, label: "spoke to", tokens: ["spoke", "to"], location: "baghdad", provenance: [["demo-002", 0, 0]] },
  ],
  node_total: 7,
  edge_total: 4,
  limit: 500,
  offset: 0,
};

/** GET /api/graph/path?source=The men&target=their leader */
export const DEMO_PATH: PathPayload = { found: true, nodes: [4, 5], edges: [3], cost: 1.0 };

/** GET /api/graph/path?source=John&target=the bunker (different components) */
export const DEMO_NO_PATH: PathPayload = { found: false, nodes: [], edges: [], cost: 0.0 };

/** GET /api/graph/centrality */
export const DEMO_CENTRALITY: CentralityPayload = {
  scores: [
    { node_id: 2, score: 0.3333333333333333, display_name: "The group of soldiers" },
    { node_id: 0, score: 0.2222222222222222, display_name: "the bunker" },
    { node_id: 6, score: 0.2222222222222222, display_name: "this morning" },
    { node_id: 1, score: 0.16666666666666666, display_name: "eastern Baghdad" },
    { node_id: 3, score: 0.16666666666666666, display_name: "John" },
    { node_id: 4, score: 0.16666666666666666, display_name: "The men" },
    { node_id: 5, score: 0.16666666666666666, display_name: "their leader" },
  ],
};

/** GET /api/graph/query?relation=travel */
export const DEMO_QUERY: GraphPayload = {
  nodes: [
    { id: 1, canonical: "eastern baghdad", display: "eastern Baghdad", class: "LOCATION", locations: ["baghdad"], mentions: 1 },
    { id: 3, canonical: "john", display: "John", class: "PERSON", locations: ["baghdad", "eastern baghdad"], mentions: 1 },
  ],
  edges: [
    { id: 2, source: 3, target: 1, label: "traveled to", tokens: ["travel", "to"], location: "baghdad", provenance: [["demo-002", 1, 0]] },
  ],
  node_total: 2,
  edge_total: 1,
};

/** GET /api/graph/path?...target=nobody → 404 body */
export const UNKNOWN_NODE_ERROR: ErrorBody = {
  code: "unknown_node",
  message: "unknown node: nobody",
  detail: "nobody",
};
