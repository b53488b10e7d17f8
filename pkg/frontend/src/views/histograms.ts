/* Scene description for the distance histograms.
 *
 * The grid shows one compact hue strip per row (and one for the whole
 * matrix); clicking a strip expands it into bars with the scenario-A
 * cutoffs marked.  Counts map to color relative to the strip's own peak,
 * so a row reads the same whether it holds 13 pairs or 9000.
 */

import { EMPTY_CELL, ramp } from "../colormap.js";
import type { HistogramPayload } from "../types.js";

/** One css color per bin; empty bins get EMPTY_CELL, never the ramp. */
export function stripColors(h: HistogramPayload): string[] {
  const peak = Math.max(...h.counts, 1);
  return h.counts.map((c) => (c === 0 ? EMPTY_CELL : ramp(c / peak)));
}

export interface Bar {
  /** Left edge and width in [0, 1] across the distance axis. */
  x: number;
  w: number;
  /** Height in [0, 1] relative to the tallest bin. */
  h: number;
  count: number;
}

export interface Marker {
  label: string;
  /** Position in [0, 1] along the distance axis. */
  x: number;
}

export interface ExpandedScene {
  bars: Bar[];
  markers: Marker[];
}

/** Bars plus one marker per cutoff ("0.05" -> threshold value). */
export function expandedScene(h: HistogramPayload, thresholds: Record<string, number>): ExpandedScene {
  const peak = Math.max(...h.counts, 1);
  const w = 1 / h.bins;
  const bars = h.counts.map((count, i) => ({ x: i * w, w, h: count / peak, count }));
  const markers = Object.entries(thresholds)
    .map(([label, x]) => ({ label, x }))
    .sort((a, b) => a.x - b.x);
  return { bars, markers };
}

/** Index of the first populated bin, or -1 when the row is empty. */
export function firstOccupiedBin(h: HistogramPayload): number {
  return h.counts.findIndex((c) => c > 0);
}

/** Width of the empty run following `bin`, in bins. A copied pair shows up
 * as an occupied low bin with a wide gap before the unrelated mass. */
export function gapAfter(h: HistogramPayload, bin: number): number {
  let run = 0;
  for (let i = bin + 1; i < h.counts.length && h.counts[i] === 0; i++) run++;
  return run;
}
