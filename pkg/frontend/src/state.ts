/* View state and its URL-hash encoding.
 *
 * Everything the UI shows is a pure function of this record plus server
 * payloads, and the record round-trips through location.hash so any screen
 * can be shared as a link.  decode() is deliberately forgiving: unknown
 * keys are dropped and malformed values fall back field by field, so stale
 * links degrade instead of breaking.
 */

import type { Linkage } from "./types.js";

export type ViewName = "graph" | "histograms" | "dendrogram" | "flags" | "pair";

export interface ViewState {
  view: ViewName;
  test: string;
  /** Graph slider position and dendrogram cut height, in distance units. */
  threshold: number;
  alpha: number;
  linkage: Linkage;
  /** Tile budget for the pair view. */
  n: number;
  /** Bin count for an expanded histogram row. */
  bins: number;
  /** Graph focus vertex and neighborhood radius; null shows the whole graph. */
  focus: string | null;
  hops: number;
  /** Expanded histogram row, if any. */
  sel: string | null;
  pair: [string, string] | null;
}

const VIEWS: readonly ViewName[] = ["graph", "histograms", "dendrogram", "flags", "pair"];
const LINKAGES: readonly Linkage[] = ["single", "complete", "average"];

export function defaultState(): ViewState {
  return {
    view: "graph",
    test: "ncd_tokens",
    threshold: 0.5,
    alpha: 0.05,
    linkage: "average",
    n: 5,
    bins: 64,
    focus: null,
    hops: 2,
    sel: null,
    pair: null,
  };
}

function num(raw: string | null, fallback: number, lo: number, hi: number): number {
  if (raw === null) return fallback;
  const v = Number.parseFloat(raw);
  if (!Number.isFinite(v) || v < lo || v > hi) return fallback;
  return v;
}

function int(raw: string | null, fallback: number, lo: number, hi: number): number {
  const v = num(raw, fallback, lo, hi);
  return Number.isInteger(v) ? v : fallback;
}

function oneOf<T extends string>(raw: string | null, allowed: readonly T[], fallback: T): T {
  return raw !== null && (allowed as readonly string[]).includes(raw) ? (raw as T) : fallback;
}

/* Key order is fixed and null fields are skipped, so encoding is canonical:
 * for any state s, decode(encode(s)) deep-equals s, and for any hash h that
 * encode produced, encode(decode(h)) === h. */
export function encodeState(s: ViewState): string {
  const q = new URLSearchParams();
  q.set("view", s.view);
  q.set("test", s.test);
  q.set("t", String(s.threshold));
  q.set("alpha", String(s.alpha));
  q.set("linkage", s.linkage);
  q.set("n", String(s.n));
  q.set("bins", String(s.bins));
  if (s.focus !== null) {
    q.set("focus", s.focus);
    q.set("hops", String(s.hops));
  }
  if (s.sel !== null) q.set("sel", s.sel);
  if (s.pair !== null) q.set("pair", `${s.pair[0]}~${s.pair[1]}`);
  return "#" + q.toString();
}

export function decodeState(hash: string, fallback: ViewState = defaultState()): ViewState {
  const q = new URLSearchParams(hash.startsWith("#") ? hash.slice(1) : hash);
  const focus = q.get("focus");
  const pairRaw = q.get("pair");
  let pair: [string, string] | null = null;
  if (pairRaw !== null) {
    const parts = pairRaw.split("~");
    if (parts.length === 2 && parts[0] !== "" && parts[1] !== "") pair = [parts[0], parts[1]];
  }
  return {
    view: oneOf(q.get("view"), VIEWS, fallback.view),
    test: q.get("test") ?? fallback.test,
    threshold: num(q.get("t"), fallback.threshold, 0, 1),
    alpha: num(q.get("alpha"), fallback.alpha, 0, 1),
    linkage: oneOf(q.get("linkage"), LINKAGES, fallback.linkage),
    n: int(q.get("n"), fallback.n, 1, 10_000),
    bins: int(q.get("bins"), fallback.bins, 2, 4096),
    focus: focus !== null && focus !== "" ? focus : null,
    hops: int(q.get("hops"), fallback.hops, 0, 100),
    sel: q.get("sel") || null,
    pair,
  };
}

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  /** Drop any pending call without firing it. */
  cancel(): void;
}

/** Trailing-edge debounce; repeated calls within `ms` collapse to the last. */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, ms: number): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  const call = (...args: A): void => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, ms);
  };
  return Object.assign(call, {
    cancel(): void {
      if (timer !== null) {
        clearTimeout(timer);
        timer = null;
      }
    },
  });
}
