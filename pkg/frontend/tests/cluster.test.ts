import { describe, expect, it } from "vitest";

import { cutDendrogram, graphComponents, memberClusters } from "../src/cluster.js";
import { dendroSingle, report } from "./fixtures.js";

describe("cutDendrogram", () => {
  it("cut at 1.0 gives one cluster", () => {
    const parts = cutDendrogram(report.ids, dendroSingle.merges, 1.0);
    expect(parts).toHaveLength(1);
    expect(parts[0]).toEqual([...report.ids].sort());
  });

  it("cut at 0 gives all singletons", () => {
    const parts = cutDendrogram(report.ids, dendroSingle.merges, 0);
    expect(parts).toHaveLength(report.ids.length);
    expect(parts.every((g) => g.length === 1)).toBe(true);
  });

  it("cut between merge heights splits exactly at the gap", () => {
    // Heights in the fixture: 0.0702, 0.0899, 0.2123, 0.2557, then 0.48+.
    const parts = cutDendrogram(report.ids, dendroSingle.merges, 0.3);
    expect(parts).toContainEqual(["MP10", "P10"]);
    expect(parts).toContainEqual(["MP5", "P5"]);
    expect(parts).toContainEqual(["P3RGP8", "P8", "P8RFP2"]);
    expect(parts).toHaveLength(3 + (report.ids.length - 7));
  });

  it("a cut exactly at a merge height includes that merge", () => {
    const h = dendroSingle.merges[0][2];
    const below = cutDendrogram(report.ids, dendroSingle.merges, h);
    expect(below).toContainEqual(["MP10", "P10"]);
    const above = cutDendrogram(report.ids, dendroSingle.merges, h - 1e-12);
    expect(above).not.toContainEqual(["MP10", "P10"]);
  });
});

describe("graphComponents", () => {
  it("keeps isolated vertices as singletons", () => {
    const parts = graphComponents(["a", "b", "c", "d"], [{ a: "a", b: "c" }]);
    expect(parts).toEqual([["a", "c"], ["b"], ["d"]]);
  });

  it("merges chains transitively", () => {
    const parts = graphComponents(
      ["a", "b", "c", "d", "e"],
      [
        { a: "a", b: "b" },
        { a: "b", b: "c" },
        { a: "d", b: "e" },
      ],
    );
    expect(parts).toEqual([
      ["a", "b", "c"],
      ["d", "e"],
    ]);
  });

  it("rejects edges pointing outside the vertex list", () => {
    expect(() => graphComponents(["a"], [{ a: "a", b: "zz" }])).toThrow();
  });
});

describe("memberClusters", () => {
  it("labels members with their canonical group index", () => {
    const labels = memberClusters([["a", "c"], ["b"]]);
    expect(labels.get("a")).toBe(0);
    expect(labels.get("c")).toBe(0);
    expect(labels.get("b")).toBe(1);
  });
});
