/* Scene description for the side-by-side pair view.
 *
 * Each matched tile gets one categorical color used in both panes, so a
 * reader can eyeball which block moved where.  Byte runs from the server
 * are converted to text segments with TextEncoder/TextDecoder rather than
 * string slicing: offsets are byte offsets and sources are not guaranteed
 * to be ASCII.
 */

import { fragmentColor } from "../colormap.js";
import type { ByteRun, PairPayload, Tile } from "../types.js";

export interface PaneSpan {
  /** Byte range within the file. */
  start: number;
  end: number;
  /** Fragment color, or null for unmatched stretches. */
  color: string | null;
  /** Tile index, or null for unmatched stretches. */
  tile: number | null;
}

function sideSpans(
  tiles: readonly Tile[],
  side: "a_bytes" | "b_bytes",
  fileIndex: number,
  byteLength: number,
): PaneSpan[] {
  const matched: PaneSpan[] = [];
  tiles.forEach((t, k) => {
    for (const [fi, start, end] of t[side]) {
      if (fi !== fileIndex) continue;
      if (start < 0 || end > byteLength || start >= end) {
        throw new Error(`tile ${k} run [${start}, ${end}) outside file of ${byteLength} bytes`);
      }
      matched.push({ start, end, color: fragmentColor(k), tile: k });
    }
  });
  matched.sort((p, q) => p.start - q.start);
  for (let i = 1; i < matched.length; i++) {
    if (matched[i].start < matched[i - 1].end) {
      throw new Error(`overlapping tile runs at byte ${matched[i].start}`);
    }
  }

  const out: PaneSpan[] = [];
  let at = 0;
  for (const span of matched) {
    if (span.start > at) out.push({ start: at, end: span.start, color: null, tile: null });
    out.push(span);
    at = span.end;
  }
  if (at < byteLength) out.push({ start: at, end: byteLength, color: null, tile: null });
  return out;
}

export interface TileKey {
  index: number;
  color: string;
  length: number;
}

export interface PairScene {
  left: PaneSpan[];
  right: PaneSpan[];
  key: TileKey[];
  coverage: number;
}

/**
 * Spans for both panes over the first `n` tiles (the server already sorts
 * longest-first).  `aBytes`/`bBytes` are the byte lengths of the displayed
 * file on each side; `aFile`/`bFile` pick which file's runs to show, since
 * the two submissions have independent file lists.
 */
export function pairScene(
  p: PairPayload,
  aBytes: number,
  bBytes: number,
  n: number = p.tiles.length,
  aFile = 0,
  bFile = 0,
): PairScene {
  const shown = p.tiles.slice(0, Math.max(0, n));
  return {
    left: sideSpans(shown, "a_bytes", aFile, aBytes),
    right: sideSpans(shown, "b_bytes", bFile, bBytes),
    key: shown.map((t, k) => ({ index: k, color: fragmentColor(k), length: t.length })),
    coverage: p.coverage,
  };
}

export interface TextSegment {
  text: string;
  color: string | null;
  tile: number | null;
}

/** Cut `text` along byte-offset spans; concatenating the segments gives
 * back the original text. */
export function segmentText(text: string, spans: readonly PaneSpan[]): TextSegment[] {
  const bytes = new TextEncoder().encode(text);
  const decoder = new TextDecoder("utf-8", { fatal: false });
  return spans.map((s) => ({
    text: decoder.decode(bytes.subarray(s.start, s.end)),
    color: s.color,
    tile: s.tile,
  }));
}

export function byteLength(text: string): number {
  return new TextEncoder().encode(text).length;
}

/** Validate a run table against its file lengths (debug aid for odd corpora). */
export function runsInBounds(runs: readonly ByteRun[], lengths: readonly number[]): boolean {
  return runs.every(([fi, s, e]) => fi >= 0 && fi < lengths.length && s >= 0 && e <= lengths[fi] && s < e);
}
