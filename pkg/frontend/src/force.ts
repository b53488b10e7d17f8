/* Force-directed placement for the threshold graph.
 *
 * Nothing here is random: initial positions come from a golden-angle
 * spiral over the sorted vertex list and the integrator is plain damped
 * Euler, so the same payload always lands in the same picture and layout
 * tests can assert exact output.  Edge rest lengths scale with reported
 * distance, which is what makes near-duplicate clumps visually tight.
 */

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  a: string;
  b: string;
  distance: number;
}

export interface LayoutParams {
  width: number;
  height: number;
  /** Pairwise push strength between all vertices. */
  repulsion: number;
  /** Spring constant toward each edge's rest length. */
  spring: number;
  /** Rest length for an edge of distance 1.0, in pixels. */
  reach: number;
  /** Pull toward the canvas center. */
  gravity: number;
  /** Velocity kept per step, in (0, 1). */
  damping: number;
}

export function defaultParams(width: number, height: number): LayoutParams {
  return {
    width,
    height,
    repulsion: 1800,
    spring: 0.06,
    reach: Math.min(width, height) * 0.9,
    gravity: 0.02,
    damping: 0.85,
  };
}

const GOLDEN_ANGLE = Math.PI * (3 - Math.sqrt(5));

export function seedLayout(ids: readonly string[], width: number, height: number): LayoutNode[] {
  const cx = width / 2;
  const cy = height / 2;
  const spread = Math.min(width, height) * 0.3;
  return ids.map((id, i) => {
    const r = spread * Math.sqrt((i + 1) / Math.max(1, ids.length));
    const angle = i * GOLDEN_ANGLE;
    return { id, x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle), vx: 0, vy: 0 };
  });
}

export function stepLayout(nodes: LayoutNode[], edges: readonly LayoutEdge[], p: LayoutParams): void {
  const index = new Map(nodes.map((node, i) => [node.id, i]));
  const fx = new Array<number>(nodes.length).fill(0);
  const fy = new Array<number>(nodes.length).fill(0);

  for (let i = 0; i < nodes.length; i++) {
    for (let j = i + 1; j < nodes.length; j++) {
      let dx = nodes[j].x - nodes[i].x;
      let dy = nodes[j].y - nodes[i].y;
      // Coincident nodes get a deterministic nudge along x so the pair
      // separates the same way every run.
      if (dx === 0 && dy === 0) dx = 1e-3 * (j - i);
      const d2 = dx * dx + dy * dy;
      const f = p.repulsion / d2;
      const d = Math.sqrt(d2);
      fx[i] -= (f * dx) / d;
      fy[i] -= (f * dy) / d;
      fx[j] += (f * dx) / d;
      fy[j] += (f * dy) / d;
    }
  }

  for (const e of edges) {
    const i = index.get(e.a);
    const j = index.get(e.b);
    if (i === undefined || j === undefined) continue;
    let dx = nodes[j].x - nodes[i].x;
    let dy = nodes[j].y - nodes[i].y;
    if (dx === 0 && dy === 0) dx = 1e-3;
    const d = Math.sqrt(dx * dx + dy * dy);
    // Rest length floors at 8% of reach so identical pairs stay readable.
    const rest = p.reach * Math.max(0.08, e.distance);
    const f = p.spring * (d - rest);
    fx[i] += (f * dx) / d;
    fy[i] += (f * dy) / d;
    fx[j] -= (f * dx) / d;
    fy[j] -= (f * dy) / d;
  }

  const cx = p.width / 2;
  const cy = p.height / 2;
  for (let i = 0; i < nodes.length; i++) {
    fx[i] += (cx - nodes[i].x) * p.gravity;
    fy[i] += (cy - nodes[i].y) * p.gravity;
    nodes[i].vx = (nodes[i].vx + fx[i]) * p.damping;
    nodes[i].vy = (nodes[i].vy + fy[i]) * p.damping;
    nodes[i].x += nodes[i].vx;
    nodes[i].y += nodes[i].vy;
  }
}

export function runLayout(
  ids: readonly string[],
  edges: readonly LayoutEdge[],
  params?: Partial<LayoutParams>,
  iterations = 300,
): LayoutNode[] {
  const p = { ...defaultParams(900, 600), ...params };
  const nodes = seedLayout(ids, p.width, p.height);
  for (let k = 0; k < iterations; k++) stepLayout(nodes, edges, p);
  return nodes;
}
