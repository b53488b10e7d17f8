/* Row model for the flag table.
 *
 * The server already orders flags by score, but a null score means the
 * row's spread was zero and the outlier is effectively infinite, so those
 * sort to the very top regardless of payload order.
 */

import type { FlagsPayload } from "../types.js";

export interface FlagRow {
  a: string;
  b: string;
  distance: number;
  score: number | null;
  scoreLabel: string;
  /** Owning row under scenario B; null under scenario A. */
  row: string | null;
}

export function flagRows(f: FlagsPayload): FlagRow[] {
  const rows: FlagRow[] = f.flags.map((fl) => ({
    a: fl.pair[0],
    b: fl.pair[1],
    distance: fl.distance,
    score: fl.score,
    scoreLabel: fl.score === null ? "inf" : fl.score.toFixed(2),
    row: fl.row,
  }));
  rows.sort((p, q) => {
    if (p.score === null && q.score === null) return 0;
    if (p.score === null) return -1;
    if (q.score === null) return 1;
    return q.score - p.score;
  });
  return rows;
}
