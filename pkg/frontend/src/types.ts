/** Payload shapes of the service's JSON endpoints. */

export interface NodeRecord {
  id: number;
  canonical: string;
  display: string;
  class: string;
  locations: string[];
  mentions: number;
}

export interface EdgeRecord {
  id: number;
  source: number;
  target: number;
  label: string;
  tokens: string[];
  location: string | null;
  provenance: [string, number, number][];
}

export interface GraphPayload {
  nodes: NodeRecord[];
  edges: EdgeRecord[];
  node_total: number;
  edge_total: number;
  limit?: number;
  offset?: number;
}

export interface PathPayload {
  found: boolean;
  nodes: number[];
  edges: number[];
  cost: number;
}

export interface CentralityEntry {
  node_id: number;
  score: number;
  display_name: string;
}

export interface CentralityPayload {
  scores: CentralityEntry[];
}

export interface HealthPayload {
  status: string;
  version: string;
  active_run: string | null;
  staged_documents: number;
  nodes: number;
  edges: number;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: string | null;
}
