/** Pure force-directed layout: deterministic seeding, explicit quiescence.
 *
 * The server sends no coordinates; positions live entirely on the client.
 * Everything here is canvas-free so the simulation is unit-testable.
 */

export interface LayoutParams {
  width: number;
  height: number;
  /** pull toward the canvas center, per unit distance */
  gravity: number;
  /** pairwise push-apart strength */
  repulsion: number;
  /** natural spring length of an edge */
  springLength: number;
  /** spring stiffness */
  springStrength: number;
  /** velocity retained per step (0..1) */
  damping: number;
  timeStep: number;
}

export const DEFAULT_PARAMS: LayoutParams = {
  width: 960,
  height: 640,
  gravity: 0.03,
  repulsion: 6000,
  springLength: 90,
  springStrength: 0.02,
  damping: 0.85,
  timeStep: 1,
};

/** Mean kinetic energy per node below which the layout counts as settled. */
export const QUIESCENCE_THRESHOLD = 0.02;

/** Hard cap on relaxation steps; quiescence must arrive well before this. */
export const MAX_STEPS = 3000;

/** Per-step decay of the force temperature; guarantees the system cools to rest. */
const ALPHA_DECAY = 0.0228;

/** Per-step speed cap (px); keeps close-pass repulsion spikes from launching nodes. */
const MAX_SPEED = 30;

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  source: number;
  target: number;
}

const GOLDEN_ANGLE = Math.PI * (3 - Math.sqrt(5));

/** Deterministic sunflower-spiral seeding in node-id order (no RNG). */
export function seedPositions(
  ids: number[],
  width: number,
  height: number,
): Map<number, { x: number; y: number }> {
  const sorted = [...ids].sort((a, b) => a - b);
  const cx = width / 2;
  const cy = height / 2;
  const spread = Math.min(width, height) * 0.38;
  const positions = new Map<number, { x: number; y: number }>();
  sorted.forEach((id, i) => {
    const r = spread * Math.sqrt((i + 0.5) / Math.max(sorted.length, 1));
    const a = i * GOLDEN_ANGLE;
    positions.set(id, { x: cx + r * Math.cos(a), y: cy + r * Math.sin(a) });
  });
  return positions;
}

export class ForceLayout {
  readonly nodes: LayoutNode[];
  private readonly index: Map<number, LayoutNode>;
  private readonly springs: { i: number; j: number }[];
  private readonly params: LayoutParams;
  private lastEnergy = Number.POSITIVE_INFINITY;
  private alpha = 1;

  constructor(ids: number[], edges: LayoutEdge[], params: Partial<LayoutParams> = {}) {
    this.params = { ...DEFAULT_PARAMS, ...params };
    const seeds = seedPositions(ids, this.params.width, this.params.height);
    this.nodes = [...ids]
      .sort((a, b) => a - b)
      .map((id) => {
        const p = seeds.get(id)!;
        return { id, x: p.x, y: p.y, vx: 0, vy: 0 };
      });
    this.index = new Map(this.nodes.map((n) => [n.id, n]));
    const slot = new Map(this.nodes.map((n, i) => [n.id, i]));
    this.springs = edges
      .filter((e) => slot.has(e.source) && slot.has(e.target))
      .map((e) => ({ i: slot.get(e.source)!, j: slot.get(e.target)! }));
  }

  position(id: number): { x: number; y: number } | undefined {
    const n = this.index.get(id);
    return n ? { x: n.x, y: n.y } : undefined;
  }

  /** One relaxation tick; returns mean kinetic energy per node. */
  step(): number {
    const { gravity, repulsion, springLength, springStrength, damping, timeStep, width, height } =
      this.params;
    const n = this.nodes.length;
    if (n === 0) {
      this.lastEnergy = 0;
      return 0;
    }
    const fx = new Array<number>(n).fill(0);
    const fy = new Array<number>(n).fill(0);

    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const a = this.nodes[i];
        const b = this.nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-4) {
          // deterministic nudge for coincident points
          dx = 0.01 * ((i - j) % 3 || 1);
          dy = 0.01;
          d2 = dx * dx + dy * dy;
        }
        const f = repulsion / d2;
        const d = Math.sqrt(d2);
        fx[i] += (f * dx) / d;
        fy[i] += (f * dy) / d;
        fx[j] -= (f * dx) / d;
        fy[j] -= (f * dy) / d;
      }
    }

    for (const { i, j } of this.springs) {
      const a = this.nodes[i];
      const b = this.nodes[j];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-2);
      const f = springStrength * (d - springLength);
      fx[i] += (f * dx) / d;
      fy[i] += (f * dy) / d;
      fx[j] -= (f * dx) / d;
      fy[j] -= (f * dy) / d;
    }

    const cx = width / 2;
    const cy = height / 2;
    const alpha = this.alpha;
    let total = 0;
    this.nodes.forEach((node, i) => {
      fx[i] += (cx - node.x) * gravity;
      fy[i] += (cy - node.y) * gravity;
      node.vx = (node.vx + fx[i] * alpha * timeStep) * damping;
      node.vy = (node.vy + fy[i] * alpha * timeStep) * damping;
      const speed = Math.hypot(node.vx, node.vy);
      if (speed > MAX_SPEED) {
        node.vx *= MAX_SPEED / speed;
        node.vy *= MAX_SPEED / speed;
      }
      node.x += node.vx * timeStep;
      node.y += node.vy * timeStep;
      total += 0.5 * (node.vx * node.vx + node.vy * node.vy);
    });
    this.alpha *= 1 - ALPHA_DECAY;
    this.lastEnergy = total / n;
    return this.lastEnergy;
  }

  isQuiescent(): boolean {
    return this.lastEnergy < QUIESCENCE_THRESHOLD;
  }

  /** Relax until settled; returns the step count and final energy. */
  runUntilQuiescent(maxSteps = MAX_STEPS): { steps: number; energy: number } {
    let energy = this.lastEnergy;
    for (let i = 1; i <= maxSteps; i++) {
      energy = this.step();
      if (energy < QUIESCENCE_THRESHOLD) {
        return { steps: i, energy };
      }
    }
    return { steps: maxSteps, energy };
  }
}
