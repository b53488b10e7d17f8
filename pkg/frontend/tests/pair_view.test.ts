import { describe, expect, it } from "vitest";

import { fragmentColor } from "../src/colormap.js";
import { byteLength, pairScene, runsInBounds, segmentText } from "../src/views/pair.js";
import type { PairPayload } from "../src/types.js";
import { pairMutant, sourceMp10, sourceP10 } from "./fixtures.js";

const LEN_A = byteLength(sourceMp10.text);
const LEN_B = byteLength(sourceP10.text);

describe("pair scene", () => {
  it("uses one shared color per tile across both panes", () => {
    const scene = pairScene(pairMutant, LEN_A, LEN_B);
    for (const tileKey of scene.key) {
      const left = scene.left.filter((s) => s.tile === tileKey.index);
      const right = scene.right.filter((s) => s.tile === tileKey.index);
      expect(left.length).toBeGreaterThan(0);
      expect(right.length).toBeGreaterThan(0);
      for (const s of [...left, ...right]) expect(s.color).toBe(tileKey.color);
    }
  });

  it("tiles both panes contiguously from byte 0 to the file end", () => {
    const scene = pairScene(pairMutant, LEN_A, LEN_B);
    for (const [spans, len] of [
      [scene.left, LEN_A],
      [scene.right, LEN_B],
    ] as const) {
      expect(spans[0].start).toBe(0);
      expect(spans[spans.length - 1].end).toBe(len);
      for (let i = 1; i < spans.length; i++) expect(spans[i].start).toBe(spans[i - 1].end);
    }
  });

  it("places the matched runs exactly where the payload says", () => {
    const scene = pairScene(pairMutant, LEN_A, LEN_B);
    const left0 = scene.left.find((s) => s.tile === 0);
    expect(left0?.start).toBe(pairMutant.tiles[0].a_bytes[0][1]);
    expect(left0?.end).toBe(pairMutant.tiles[0].a_bytes[0][2]);
    const right0 = scene.right.find((s) => s.tile === 0);
    expect(right0?.start).toBe(pairMutant.tiles[0].b_bytes[0][1]);
    expect(right0?.end).toBe(pairMutant.tiles[0].b_bytes[0][2]);
  });

  it("adds colors monotonically as n grows", () => {
    const colorsAt = (n: number) =>
      new Set(
        pairScene(pairMutant, LEN_A, LEN_B, n)
          .left.filter((s) => s.color !== null)
          .map((s) => s.color as string),
      );
    const one = colorsAt(1);
    const all = colorsAt(pairMutant.tiles.length);
    expect(one.size).toBe(1);
    expect(all.size).toBe(pairMutant.tiles.length);
    for (const c of one) expect(all.has(c)).toBe(true);
  });

  it("renders an identical pair as one whole-file color", () => {
    const text = "int main(void) { return 0; }\n";
    const len = byteLength(text);
    const identical: PairPayload = {
      pair: ["X", "X2"],
      coverage: 1.0,
      tiles: [
        {
          a_span: [0, 9],
          b_span: [0, 9],
          length: 9,
          a_bytes: [[0, 0, len]],
          b_bytes: [[0, 0, len]],
        },
      ],
      test: "ncd_tokens",
      min_match_length: 8,
    };
    const scene = pairScene(identical, len, len);
    expect(scene.left).toHaveLength(1);
    expect(scene.right).toHaveLength(1);
    expect(scene.left[0].color).toBe(fragmentColor(0));
    expect(scene.left[0].color).toBe(scene.right[0].color);
    const segs = segmentText(text, scene.left);
    expect(segs).toHaveLength(1);
    expect(segs[0].text).toBe(text);
  });

  it("rejects overlapping or out-of-range runs", () => {
    const bad: PairPayload = {
      ...pairMutant,
      tiles: [
        { a_span: [0, 5], b_span: [0, 5], length: 5, a_bytes: [[0, 0, 40]], b_bytes: [[0, 0, 40]] },
        { a_span: [3, 5], b_span: [3, 5], length: 5, a_bytes: [[0, 30, 60]], b_bytes: [[0, 50, 90]] },
      ],
    };
    expect(() => pairScene(bad, 100, 100)).toThrow(/overlapping/);
    const oob: PairPayload = {
      ...pairMutant,
      tiles: [{ a_span: [0, 5], b_span: [0, 5], length: 5, a_bytes: [[0, 0, 500]], b_bytes: [[0, 0, 50]] }],
    };
    expect(() => pairScene(oob, 100, 100)).toThrow(/outside file/);
  });
});

describe("segmentText", () => {
  it("reassembles the original source byte for byte", () => {
    const scene = pairScene(pairMutant, LEN_A, LEN_B);
    expect(segmentText(sourceMp10.text, scene.left).map((s) => s.text).join("")).toBe(sourceMp10.text);
    expect(segmentText(sourceP10.text, scene.right).map((s) => s.text).join("")).toBe(sourceP10.text);
  });

  it("cuts on byte offsets, not UTF-16 indexes", () => {
    const text = "/* tëst */ int k;\n";
    // "ë" is two bytes (4-5), so byte 7 falls after the following "s"
    // while UTF-16 index 7 would fall one character later.
    const spans = [
      { start: 0, end: 7, color: "#fff", tile: 0 },
      { start: 7, end: byteLength(text), color: null, tile: null },
    ];
    const segs = segmentText(text, spans);
    expect(segs[0].text).toBe("/* tës");
    expect(segs.map((s) => s.text).join("")).toBe(text);
  });
});

describe("runsInBounds", () => {
  it("accepts the fixture payload against its file lengths", () => {
    for (const t of pairMutant.tiles) {
      expect(runsInBounds(t.a_bytes, [LEN_A])).toBe(true);
      expect(runsInBounds(t.b_bytes, [LEN_B])).toBe(true);
    }
  });

  it("flags bad file indexes and inverted ranges", () => {
    expect(runsInBounds([[1, 0, 5]], [100])).toBe(false);
    expect(runsInBounds([[0, 5, 5]], [100])).toBe(false);
    expect(runsInBounds([[0, 5, 200]], [100])).toBe(false);
  });
});
