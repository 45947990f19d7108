import { describe, expect, it } from "vitest";

import {
  ForceLayout,
  MAX_STEPS,
  QUIESCENCE_THRESHOLD,
  seedPositions,
} from "../src/layout.js";

function ring(n: number): { ids: number[]; edges: { source: number; target: number }[] } {
  const ids = Array.from({ length: n }, (_, i) => i);
  const edges = ids.map((i) => ({ source: i, target: (i + 1) % n }));
  return { ids, edges };
}

describe("seedPositions", () => {
  it("is deterministic and independent of id order", () => {
    const a = seedPositions([3, 1, 2], 800, 600);
    const b = seedPositions([1, 2, 3], 800, 600);
    expect(a).toEqual(b);
  });

  it("spreads nodes inside the canvas", () => {
    const pos = seedPositions(Array.from({ length: 50 }, (_, i) => i), 800, 600);
    for (const { x, y } of pos.values()) {
      expect(x).toBeGreaterThan(0);
      expect(x).toBeLessThan(800);
      expect(y).toBeGreaterThan(0);
      expect(y).toBeLessThan(600);
    }
    const unique = new Set([...pos.values()].map((p) => `${p.x},${p.y}`));
    expect(unique.size).toBe(50);
  });
});

describe("ForceLayout", () => {
  it("reaches quiescence on a 100-node graph within the budget", () => {
    const { ids, edges } = ring(100);
    const layout = new ForceLayout(ids, edges);
    const started = Date.now();
    const { steps, energy } = layout.runUntilQuiescent();
    const elapsedMs = Date.now() - started;
    expect(energy).toBeLessThan(QUIESCENCE_THRESHOLD);
    expect(steps).toBeLessThan(MAX_STEPS);
    expect(elapsedMs).toBeLessThan(10_000);
    expect(layout.isQuiescent()).toBe(true);
  });

  it("keeps every coordinate finite", () => {
    const { ids, edges } = ring(30);
    const layout = new ForceLayout(ids, edges);
    layout.runUntilQuiescent();
    for (const n of layout.nodes) {
      expect(Number.isFinite(n.x)).toBe(true);
      expect(Number.isFinite(n.y)).toBe(true);
    }
  });

  it("is deterministic run-to-run", () => {
    const { ids, edges } = ring(25);
    const a = new ForceLayout(ids, edges);
    const b = new ForceLayout(ids, edges);
    for (let i = 0; i < 200; i++) {
      a.step();
      b.step();
    }
    expect(a.nodes).toEqual(b.nodes);
  });

  it("pulls connected nodes closer than unconnected ones on average", () => {
    const ids = [0, 1, 2, 3];
    const edges = [{ source: 0, target: 1 }];
    const layout = new ForceLayout(ids, edges, { gravity: 0.05 });
    layout.runUntilQuiescent();
    const d = (i: number, j: number) => {
      const a = layout.position(i)!;
      const b = layout.position(j)!;
      return Math.hypot(a.x - b.x, a.y - b.y);
    };
    expect(d(0, 1)).toBeLessThan(d(2, 3));
  });

  it("ignores edges whose endpoints are not in the view", () => {
    const layout = new ForceLayout([1, 2], [{ source: 1, target: 99 }]);
    expect(() => layout.runUntilQuiescent()).not.toThrow();
  });

  it("handles the empty graph", () => {
    const layout = new ForceLayout([], []);
    expect(layout.step()).toBe(0);
    expect(layout.isQuiescent()).toBe(true);
  });
});
