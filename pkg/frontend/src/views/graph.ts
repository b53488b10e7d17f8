/* Scene description for the threshold graph.
 *
 * Inputs are the server's graph payload and a finished layout; output is
 * plain draw data.  Elided edges are dropped here, not upstream, so the
 * payload stays exactly what the API sent and tests can count both.
 */

import { ramp } from "../colormap.js";
import type { LayoutEdge, LayoutNode } from "../force.js";
import { runLayout } from "../force.js";
import type { GraphEdge, GraphPayload } from "../types.js";

export interface SceneNode {
  id: string;
  x: number;
  y: number;
  r: number;
}

export interface SceneEdge {
  a: string;
  b: string;
  distance: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  color: string;
}

export interface GraphScene {
  nodes: SceneNode[];
  edges: SceneEdge[];
}

export function visibleEdges(graph: GraphPayload): GraphEdge[] {
  return graph.edges.filter((e) => !e.elided);
}

export function buildGraphScene(graph: GraphPayload, layout: readonly LayoutNode[]): GraphScene {
  const at = new Map(layout.map((n) => [n.id, n]));
  const nodes: SceneNode[] = graph.vertices.map((id) => {
    const n = at.get(id);
    if (n === undefined) throw new Error(`vertex missing from layout: ${id}`);
    return { id, x: n.x, y: n.y, r: 6 };
  });
  const edges: SceneEdge[] = visibleEdges(graph).map((e) => {
    const na = at.get(e.a);
    const nb = at.get(e.b);
    if (na === undefined || nb === undefined) throw new Error(`edge endpoint missing from layout: ${e.a}-${e.b}`);
    return {
      a: e.a,
      b: e.b,
      distance: e.distance,
      x1: na.x,
      y1: na.y,
      x2: nb.x,
      y2: nb.y,
      // Near-identical pairs draw hot and heavy; ramp is low=blue, so flip.
      width: 1 + 3 * (1 - e.distance),
      color: ramp(1 - e.distance),
    };
  });
  return { nodes, edges };
}

/** Layout plus scene in one call for the common path. */
export function layoutGraph(graph: GraphPayload, width: number, height: number): GraphScene {
  const springEdges: LayoutEdge[] = visibleEdges(graph).map(({ a, b, distance }) => ({ a, b, distance }));
  const layout = runLayout(graph.vertices, springEdges, { width, height });
  return buildGraphScene(graph, layout);
}
