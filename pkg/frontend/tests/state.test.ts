import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, decodeState, defaultState, encodeState } from "../src/state.js";
import type { ViewState } from "../src/state.js";

describe("hash codec", () => {
  it("round-trips the default state", () => {
    const s = defaultState();
    expect(decodeState(encodeState(s))).toEqual(s);
  });

  it("round-trips a fully populated state", () => {
    const s: ViewState = {
      view: "pair",
      test: "ncd_raw",
      threshold: 0.40119110632916954,
      alpha: 0.01,
      linkage: "single",
      n: 12,
      bins: 128,
      focus: "P5",
      hops: 3,
      sel: "MP10",
      pair: ["MP10", "P10"],
    };
    expect(decodeState(encodeState(s))).toEqual(s);
  });

  it("encode(decode(h)) == h for every reachable hash", () => {
    const states: ViewState[] = [
      defaultState(),
      { ...defaultState(), view: "flags", alpha: 0.01 },
      { ...defaultState(), focus: "P1", hops: 0 },
      { ...defaultState(), pair: ["P1", "P2"], n: 1, view: "pair" },
      { ...defaultState(), sel: "P8RFP2", bins: 16, threshold: 1 },
      { ...defaultState(), threshold: 0, test: "token_count_variance" },
    ];
    for (const s of states) {
      const h = encodeState(s);
      expect(encodeState(decodeState(h))).toBe(h);
    }
  });

  it("preserves full float precision through the hash", () => {
    const s = { ...defaultState(), threshold: 0.40119110632916954 };
    expect(decodeState(encodeState(s)).threshold).toBe(0.40119110632916954);
  });

  it("falls back field by field on garbage", () => {
    const d = defaultState();
    expect(decodeState("#view=teapot&t=weird&n=-3&bins=1.5&linkage=centroid")).toEqual(d);
    expect(decodeState("not even a query string")).toEqual(d);
    expect(decodeState("")).toEqual(d);
  });

  it("clamps threshold and alpha to [0, 1]", () => {
    expect(decodeState("#t=1.7").threshold).toBe(defaultState().threshold);
    expect(decodeState("#t=-0.2").threshold).toBe(defaultState().threshold);
    expect(decodeState("#t=0.62").threshold).toBe(0.62);
    expect(decodeState("#alpha=2").alpha).toBe(defaultState().alpha);
  });

  it("drops malformed pair values", () => {
    expect(decodeState("#pair=P1").pair).toBeNull();
    expect(decodeState("#pair=~P2").pair).toBeNull();
    expect(decodeState("#pair=P1~P2").pair).toEqual(["P1", "P2"]);
  });
});

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst to the final call", () => {
    const hits: number[] = [];
    const d = debounce((x: number) => hits.push(x), 100);
    d(1);
    vi.advanceTimersByTime(40);
    d(2);
    vi.advanceTimersByTime(40);
    d(3);
    expect(hits).toEqual([]);
    vi.advanceTimersByTime(99);
    expect(hits).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(hits).toEqual([3]);
  });

  it("fires separate settled calls separately", () => {
    const hits: number[] = [];
    const d = debounce((x: number) => hits.push(x), 100);
    d(1);
    vi.advanceTimersByTime(100);
    d(2);
    vi.advanceTimersByTime(100);
    expect(hits).toEqual([1, 2]);
  });

  it("cancel drops the pending call", () => {
    const hits: number[] = [];
    const d = debounce((x: number) => hits.push(x), 100);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(1000);
    expect(hits).toEqual([]);
    d(2);
    vi.advanceTimersByTime(100);
    expect(hits).toEqual([2]);
  });
});
