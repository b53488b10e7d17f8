/* Wire types for the /api endpoints. Field names and nesting mirror the
 * server's JSON exactly; the client never reshapes payloads before the
 * view layer so that fixtures captured from a live server stay valid. */

export interface AlgorithmResult {
  /** Scenario-A cutoff per alpha, keyed by the alpha as formatted by the server. */
  thresholds: Record<string, number>;
  /** Flag counts keyed like "A@0.05". */
  flag_counts: Record<string, number>;
  notices: string[];
}

export interface ReportSummary {
  schema_version: number;
  ids: string[];
  algorithms: string[];
  alphas: number[];
  file_counts: Record<string, number>;
  /** Relative paths per submission, in the deterministic file order that
   * fragment byte runs index into. */
  files: Record<string, string[]>;
  warnings: string[];
  results: Record<string, AlgorithmResult>;
}

export interface MatrixPayload {
  test: string;
  ids: string[];
  /** Upper triangle, row-major, excluding the diagonal. */
  triu: number[];
}

export interface HistogramPayload {
  bins: number;
  counts: number[];
  total: number;
}

export interface GraphEdge {
  a: string;
  b: string;
  distance: number;
  elided: boolean;
}

export interface GraphPayload {
  threshold: number;
  vertices: string[];
  edges: GraphEdge[];
}

/** [left child, right child, height]; children < n are leaves in sorted-id
 * order, children >= n are earlier merges (n + merge index). */
export type Merge = [number, number, number];

export type Linkage = "single" | "complete" | "average";

export interface DendrogramPayload {
  linkage: Linkage;
  merges: Merge[];
  leaf_order: string[];
}

export interface Flag {
  pair: [string, string];
  distance: number;
  /** null encodes an infinite outlier score (zero spread row). */
  score: number | null;
  /** Owning row for scenario B; null under scenario A. */
  row: string | null;
}

export interface FlagsPayload {
  scenario: "A" | "B";
  alpha: number;
  threshold_value: number;
  flags: Flag[];
}

/** [file index, start byte, end byte) within one submission. */
export type ByteRun = [number, number, number];

export interface Tile {
  a_span: [number, number];
  b_span: [number, number];
  length: number;
  a_bytes: ByteRun[];
  b_bytes: ByteRun[];
}

export interface PairPayload {
  pair: [string, string];
  coverage: number;
  /** Longest first; request more with ?n=. */
  tiles: Tile[];
  test: string;
  min_match_length: number;
}

export interface SourcePayload {
  id: string;
  path: string;
  text: string;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
