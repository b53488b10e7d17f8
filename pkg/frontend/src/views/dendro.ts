/* Scene description for the dendrogram.
 *
 * Leaves sit on the x axis in the server's leaf order; merge heights are
 * distances, drawn upward in [0, 1].  A cut line at the current threshold
 * splits the tree into clusters, and leaves are tagged with their cluster
 * index so the paint layer can color them consistently with the fragment
 * palette.
 */

import { fragmentColor } from "../colormap.js";
import { cutDendrogram, memberClusters } from "../cluster.js";
import type { DendrogramPayload } from "../types.js";

export interface DendroLeaf {
  id: string;
  /** Center position in [0, 1] across the baseline. */
  x: number;
  cluster: number;
  color: string;
}

export interface Segment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface DendroScene {
  leaves: DendroLeaf[];
  segments: Segment[];
  /** Cut height in distance units, clamped to [0, 1]. */
  cutY: number;
  clusterCount: number;
}

/** `ids` is the report's sorted id list; merge indices refer to it. */
export function dendroScene(ids: string[], d: DendrogramPayload, cutT: number): DendroScene {
  const n = ids.length;
  if (d.merges.length !== Math.max(0, n - 1)) {
    throw new Error(`expected ${n - 1} merges for ${n} leaves, got ${d.merges.length}`);
  }
  const cut = Math.min(1, Math.max(0, cutT));
  const components = cutDendrogram(ids, d.merges, cut);
  const clusterOf = memberClusters(components);

  const slot = new Map(d.leaf_order.map((id, i) => [id, (i + 0.5) / n]));
  const leaves: DendroLeaf[] = d.leaf_order.map((id) => {
    const cluster = clusterOf.get(id);
    if (cluster === undefined) throw new Error(`leaf not in id list: ${id}`);
    return { id, x: slot.get(id) as number, cluster, color: fragmentColor(cluster) };
  });

  // Position of every tree node: leaves at height 0, merge k at its height
  // and the midpoint of its children.
  const xs = new Array<number>(n + d.merges.length);
  const ys = new Array<number>(n + d.merges.length).fill(0);
  ids.forEach((id, i) => {
    const x = slot.get(id);
    if (x === undefined) throw new Error(`leaf order is missing ${id}`);
    xs[i] = x;
  });
  const segments: Segment[] = [];
  d.merges.forEach(([left, right, height], k) => {
    const node = n + k;
    xs[node] = (xs[left] + xs[right]) / 2;
    ys[node] = height;
    segments.push(
      { x1: xs[left], y1: ys[left], x2: xs[left], y2: height },
      { x1: xs[right], y1: ys[right], x2: xs[right], y2: height },
      { x1: xs[left], y1: height, x2: xs[right], y2: height },
    );
  });

  return { leaves, segments, cutY: cut, clusterCount: components.length };
}
