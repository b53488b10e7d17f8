/* Typed access to the captured API fixtures.
 *
 * Every file in this directory is byte-for-byte curl output from a live
 * `simdetect serve` on a synthetic corpus (10 originals, 2 mutants, 2
 * recombinants, seed 7) analyzed with the default configuration. To
 * re-capture after a server change: start `simdetect serve` on that corpus
 * and fetch the URLs named by each fixture's test usage; do not hand-edit.
 */

import type {
  DendrogramPayload,
  FlagsPayload,
  GraphPayload,
  HistogramPayload,
  MatrixPayload,
  PairPayload,
  ReportSummary,
  SourcePayload,
} from "../src/types.js";

import reportJson from "./fixtures/report.json";
import matrixJson from "./fixtures/matrix.json";
import graphDefaultJson from "./fixtures/graph_default.json";
import graphZeroJson from "./fixtures/graph_zero.json";
import graph062Json from "./fixtures/graph_062.json";
import graphFullJson from "./fixtures/graph_full.json";
import graphFocusJson from "./fixtures/graph_focus_p5.json";
import dendroSingleJson from "./fixtures/dendro_single.json";
import dendroAverageJson from "./fixtures/dendro_average.json";
import flagsA05Json from "./fixtures/flags_a05.json";
import histGlobalJson from "./fixtures/hist_global.json";
import histRowMp10Json from "./fixtures/hist_row_mp10.json";
import pairMutantJson from "./fixtures/pair_mutant.json";
import pairUnrelatedJson from "./fixtures/pair_unrelated.json";
import sourceP10Json from "./fixtures/source_p10.json";
import sourceMp10Json from "./fixtures/source_mp10.json";

export const report = reportJson as unknown as ReportSummary;
export const matrix = matrixJson as unknown as MatrixPayload;
export const graphDefault = graphDefaultJson as unknown as GraphPayload;
export const graphZero = graphZeroJson as unknown as GraphPayload;
export const graph062 = graph062Json as unknown as GraphPayload;
export const graphFull = graphFullJson as unknown as GraphPayload;
export const graphFocusP5 = graphFocusJson as unknown as GraphPayload;
export const dendroSingle = dendroSingleJson as unknown as DendrogramPayload;
export const dendroAverage = dendroAverageJson as unknown as DendrogramPayload;
export const flagsA05 = flagsA05Json as unknown as FlagsPayload;
export const histGlobal = histGlobalJson as unknown as HistogramPayload;
export const histRowMp10 = histRowMp10Json as unknown as HistogramPayload;
export const pairMutant = pairMutantJson as unknown as PairPayload;
export const pairUnrelated = pairUnrelatedJson as unknown as PairPayload;
export const sourceP10 = sourceP10Json as unknown as SourcePayload;
export const sourceMp10 = sourceMp10Json as unknown as SourcePayload;

/** Scenario-A cutoff at alpha 0.05 for the default test, as served. */
export const HAMPEL_DEFAULT = report.results["ncd_tokens"].thresholds["0.05"];
