import { describe, expect, it } from "vitest";

import {
  MAX_RADIUS,
  MIN_RADIUS,
  applyCentrality,
  applyPath,
  applyQuery,
  canFindPath,
  clearView,
  highlightedEdges,
  highlightedNodes,
  initialState,
  loadGraph,
  nodeRadius,
  setError,
  toggleSelect,
} from "../src/state.js";
import {
  DEMO_CENTRALITY,
  DEMO_GRAPH,
  DEMO_NO_PATH,
  DEMO_PATH,
  DEMO_QUERY,
} from "./fixtures.js";

function loaded() {
  return loadGraph(initialState(), DEMO_GRAPH);
}

describe("selection", () => {
  it("toggles nodes and caps the selection at two", () => {
    let s = loaded();
    s = toggleSelect(s, 4);
    s = toggleSelect(s, 5);
    expect(s.selection).toEqual([4, 5]);
    expect(canFindPath(s)).toBe(true);
    // third selection evicts the oldest
    s = toggleSelect(s, 3);
    expect(s.selection).toEqual([5, 3]);
    // clicking a selected node deselects it
    s = toggleSelect(s, 5);
    expect(s.selection).toEqual([3]);
    expect(canFindPath(s)).toBe(false);
  });

  it("ignores clicks on nodes outside the loaded subgraph", () => {
    const s = toggleSelect(loaded(), 99);
    expect(s.selection).toEqual([]);
  });

  it("prunes the selection when the view shrinks", () => {
    let s = loaded();
    s = toggleSelect(s, 4);
    s = toggleSelect(s, 3);
    s = applyQuery(s, "travel", DEMO_QUERY);
    // node 4 is not in the query subgraph; node 3 is
    expect(s.selection).toEqual([3]);
  });
});

describe("path highlight", () => {
  it("mirrors the API path payload exactly", () => {
    let s = loaded();
    s = applyPath(s, DEMO_PATH);
    expect(s.mode).toBe("path");
    expect([...highlightedNodes(s)].sort()).toEqual([...DEMO_PATH.nodes].sort());
    expect([...highlightedEdges(s)].sort()).toEqual([...DEMO_PATH.edges].sort());
    expect(s.path).toEqual(DEMO_PATH);
  });

  it("turns a miss into a notice with no highlight", () => {
    const s = applyPath(loaded(), DEMO_NO_PATH);
    expect(s.mode).toBe("none");
    expect(s.notice).toMatch(/no path/);
    expect(highlightedNodes(s).size).toBe(0);
    expect(highlightedEdges(s).size).toBe(0);
  });
});

describe("centrality sizing", () => {
  it("is monotone in the API scores", () => {
    const s = applyCentrality(loaded(), DEMO_CENTRALITY);
    const scores = DEMO_CENTRALITY.scores;
    for (let i = 0; i + 1 < scores.length; i++) {
      const bigger = nodeRadius(s, scores[i].node_id);
      const smaller = nodeRadius(s, scores[i + 1].node_id);
      expect(bigger).toBeGreaterThanOrEqual(smaller);
      if (scores[i].score > scores[i + 1].score) {
        expect(bigger).toBeGreaterThan(smaller);
      } else {
        expect(bigger).toBe(smaller);
      }
    }
  });

  it("maps the score range onto the radius range", () => {
    const s = applyCentrality(loaded(), DEMO_CENTRALITY);
    expect(nodeRadius(s, 2)).toBe(MAX_RADIUS);
    expect(nodeRadius(s, 5)).toBe(MIN_RADIUS);
  });

  it("uses a constant radius outside centrality mode", () => {
    const s = loaded();
    const radii = DEMO_GRAPH.nodes.map((n) => nodeRadius(s, n.id));
    expect(new Set(radii).size).toBe(1);
  });

  it("uses the midpoint radius when all scores tie", () => {
    const s = applyCentrality(loaded(), {
      scores: [
        { node_id: 0, score: 0.5, display_name: "a" },
        { node_id: 1, score: 0.5, display_name: "b" },
      ],
    });
    expect(nodeRadius(s, 0)).toBe((MIN_RADIUS + MAX_RADIUS) / 2);
  });
});

describe("relation query view", () => {
  it("replaces the view with exactly the API subgraph", () => {
    const s = applyQuery(loaded(), "travel", DEMO_QUERY);
    expect(s.mode).toBe("query");
    expect(s.graph).toEqual(DEMO_QUERY);
    expect(s.graph?.nodes.map((n) => n.id)).toEqual(DEMO_QUERY.nodes.map((n) => n.id));
    expect(s.graph?.edges.map((e) => e.id)).toEqual(DEMO_QUERY.edges.map((e) => e.id));
  });

  it("shows an empty-state notice when nothing matches", () => {
    const empty = { nodes: [], edges: [], node_total: 0, edge_total: 0 };
    const s = applyQuery(loaded(), "exploded", empty);
    expect(s.notice).toMatch(/no relations match/);
    expect(s.graph?.nodes).toEqual([]);
  });

  it("clear restores the full view and drops the highlight", () => {
    let s = applyQuery(loaded(), "travel", DEMO_QUERY);
    s = clearView(s);
    expect(s.graph).toEqual(DEMO_GRAPH);
    expect(s.mode).toBe("none");
    expect(s.queryText).toBeNull();
  });
});

describe("single active highlight", () => {
  it("each apply* clears the previous mode", () => {
    let s = loaded();
    s = applyPath(s, DEMO_PATH);
    s = applyCentrality(s, DEMO_CENTRALITY);
    expect(s.mode).toBe("centrality");
    expect(s.path).toBeNull();
    expect(highlightedNodes(s).size).toBe(0);

    s = applyQuery(s, "travel", DEMO_QUERY);
    expect(s.mode).toBe("query");
    expect(s.centrality).toBeNull();

    s = clearView(s);
    expect(s.mode).toBe("none");
    expect(s.path).toBeNull();
    expect(s.centrality).toBeNull();
    expect(s.queryText).toBeNull();
  });
});

describe("error banner", () => {
  it("records and clears error messages", () => {
    let s = setError(initialState(), "service unreachable");
    expect(s.error).toBe("service unreachable");
    s = loadGraph(s, DEMO_GRAPH);
    expect(s.error).toBeNull();
  });
});
