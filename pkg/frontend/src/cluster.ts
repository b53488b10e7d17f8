/* Component bookkeeping shared by the dendrogram and graph views.
 *
 * Cutting a dendrogram at height t and thresholding the distance graph at
 * t describe the same partition under single linkage; both sides are
 * computed here in one canonical form (members sorted, groups sorted by
 * first member) so views and tests can compare them structurally.
 */

import type { GraphEdge, Merge } from "./types.js";

class UnionFind {
  private readonly parent: number[];

  constructor(n: number) {
    this.parent = Array.from({ length: n }, (_, i) => i);
  }

  find(x: number): number {
    let root = x;
    while (this.parent[root] !== root) root = this.parent[root];
    while (this.parent[x] !== root) {
      const next = this.parent[x];
      this.parent[x] = root;
      x = next;
    }
    return root;
  }

  union(a: number, b: number): void {
    this.parent[this.find(a)] = this.find(b);
  }
}

function canonical(groups: Map<number, string[]>): string[][] {
  const out = [...groups.values()].map((g) => [...g].sort());
  out.sort((a, b) => (a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0));
  return out;
}

/**
 * Leaves that end up merged at or below height t form one cluster.
 *
 * `ids` must be the report's sorted id list: merge rows index into it for
 * children < ids.length and into earlier merges for the rest.
 */
export function cutDendrogram(ids: string[], merges: Merge[], t: number): string[][] {
  const n = ids.length;
  const uf = new UnionFind(n + merges.length);
  merges.forEach(([left, right, height], k) => {
    if (height <= t) {
      uf.union(left, n + k);
      uf.union(right, n + k);
    }
  });
  const groups = new Map<number, string[]>();
  ids.forEach((id, i) => {
    const root = uf.find(i);
    const g = groups.get(root);
    if (g === undefined) groups.set(root, [id]);
    else g.push(id);
  });
  return canonical(groups);
}

/** Connected components over an explicit vertex list; isolated vertices
 * come back as singletons. */
export function graphComponents(
  vertices: string[],
  edges: readonly Pick<GraphEdge, "a" | "b">[],
): string[][] {
  const index = new Map(vertices.map((v, i) => [v, i]));
  const uf = new UnionFind(vertices.length);
  for (const { a, b } of edges) {
    const ia = index.get(a);
    const ib = index.get(b);
    if (ia === undefined || ib === undefined) throw new Error(`edge endpoint not in vertex list: ${a}-${b}`);
    uf.union(ia, ib);
  }
  const groups = new Map<number, string[]>();
  vertices.forEach((v, i) => {
    const root = uf.find(i);
    const g = groups.get(root);
    if (g === undefined) groups.set(root, [v]);
    else g.push(v);
  });
  return canonical(groups);
}

/** Cluster index per member, following the canonical group order. */
export function memberClusters(components: string[][]): Map<string, number> {
  const out = new Map<string, number>();
  components.forEach((group, k) => {
    for (const member of group) out.set(member, k);
  });
  return out;
}
