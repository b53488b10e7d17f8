/* Thin fetch layer over the /api routes.
 *
 * URL builders are exported separately from the client so tests can pin
 * the exact request strings without a network.  Every GET accepts an
 * AbortSignal; the slider wiring aborts the in-flight graph request before
 * issuing the next one.
 */

import type {
  DendrogramPayload,
  FlagsPayload,
  GraphPayload,
  HistogramPayload,
  Linkage,
  MatrixPayload,
  PairPayload,
  ReportSummary,
  SourcePayload,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

function enc(part: string): string {
  return encodeURIComponent(part);
}

export function reportUrl(): string {
  return "/api/report";
}

export function matrixUrl(test: string): string {
  return `/api/matrix/${enc(test)}`;
}

export function histogramUrl(test: string, opts: { row?: string; bins?: number } = {}): string {
  const q = new URLSearchParams();
  if (opts.row !== undefined) q.set("row", opts.row);
  if (opts.bins !== undefined) q.set("bins", String(opts.bins));
  const suffix = q.size > 0 ? `?${q.toString()}` : "";
  return `/api/histogram/${enc(test)}${suffix}`;
}

export function graphUrl(
  test: string,
  threshold: number,
  opts: { focus?: string; hops?: number } = {},
): string {
  const q = new URLSearchParams();
  q.set("threshold", String(threshold));
  if (opts.focus !== undefined) {
    q.set("focus", opts.focus);
    if (opts.hops !== undefined) q.set("hops", String(opts.hops));
  }
  return `/api/graph/${enc(test)}?${q.toString()}`;
}

export function dendrogramUrl(test: string, linkage: Linkage): string {
  return `/api/dendrogram/${enc(test)}?linkage=${linkage}`;
}

export function flagsUrl(test: string, scenario: "A" | "B", alpha: number): string {
  return `/api/flags/${enc(test)}?scenario=${scenario}&alpha=${String(alpha)}`;
}

export function pairUrl(test: string, a: string, b: string, n: number): string {
  return `/api/pair/${enc(test)}/${enc(a)}/${enc(b)}?n=${String(n)}`;
}

export function sourceUrl(subId: string, path: string): string {
  const parts = path.split("/").map(enc).join("/");
  return `/api/source/${enc(subId)}/${parts}`;
}

async function raise(resp: Response): Promise<never> {
  let code = "internal_error";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body: unknown = await resp.json();
    if (typeof body === "object" && body !== null) {
      const rec = body as Record<string, unknown>;
      if (typeof rec.code === "string") code = rec.code;
      if (typeof rec.message === "string") message = rec.message;
    }
  } catch {
    /* non-JSON error body; keep the status line */
  }
  throw new ApiError(resp.status, code, message);
}

export class ApiClient {
  private readonly base: string;

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  private async getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(this.base + url, { signal });
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as T;
  }

  report(signal?: AbortSignal): Promise<ReportSummary> {
    return this.getJson(reportUrl(), signal);
  }

  matrix(test: string, signal?: AbortSignal): Promise<MatrixPayload> {
    return this.getJson(matrixUrl(test), signal);
  }

  histogram(
    test: string,
    opts: { row?: string; bins?: number } = {},
    signal?: AbortSignal,
  ): Promise<HistogramPayload> {
    return this.getJson(histogramUrl(test, opts), signal);
  }

  graph(
    test: string,
    threshold: number,
    opts: { focus?: string; hops?: number } = {},
    signal?: AbortSignal,
  ): Promise<GraphPayload> {
    return this.getJson(graphUrl(test, threshold, opts), signal);
  }

  dendrogram(test: string, linkage: Linkage, signal?: AbortSignal): Promise<DendrogramPayload> {
    return this.getJson(dendrogramUrl(test, linkage), signal);
  }

  flags(test: string, scenario: "A" | "B", alpha: number, signal?: AbortSignal): Promise<FlagsPayload> {
    return this.getJson(flagsUrl(test, scenario, alpha), signal);
  }

  pair(test: string, a: string, b: string, n: number, signal?: AbortSignal): Promise<PairPayload> {
    return this.getJson(pairUrl(test, a, b, n), signal);
  }

  async source(subId: string, path: string, signal?: AbortSignal): Promise<SourcePayload> {
    const resp = await fetch(this.base + sourceUrl(subId, path), { signal });
    if (!resp.ok) await raise(resp);
    return { id: subId, path, text: await resp.text() };
  }
}
