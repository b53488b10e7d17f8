"""Local HTTP API over a loaded report.

Serves report data, derived structures, on-demand fragments and raw
source text to the web UI.  The report is immutable once loaded, so
every response is deterministic for a fixed report and query; fragment
responses are cached by (test, a, b, n).  Structure payloads are exactly
the structure-module serializations, the server adds no computation of
its own beyond caching.

Binds are expected on 127.0.0.1: submissions never leave the machine.
"""

from __future__ import annotations

from collections import deque
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .corpus import Submission, prune, scan
from .fragments import MIN_MATCH_RAW, find_tiles, fragments_to_obj, top_n
from .lexer import TokenStream, tokenize
from .metrics import MetricError, matrix_to_obj
from .session import (
    AnalysisReport,
    SessionError,
    _flag_report_to_obj,
    parse_algorithm,
)
from .structure import (
    DEFAULT_BINS,
    dendrogram,
    dendrogram_to_obj,
    global_histogram,
    graph_to_obj,
    histogram_to_obj,
    row_histogram,
    threshold_graph,
)

__all__ = ["ApiFault", "build_app"]

LINKAGES = ("single", "complete", "average")


class ApiFault(Exception):
    """Carries the wire error triple (status, code, message)."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"status": status, "code": code, "message": message}, status_code=status
    )


def build_app(
    report: AnalysisReport,
    root,
    static_dir: Path | None = None,
) -> FastAPI:
    """Assemble the API app for one report and its corpus root.

    The root is re-scanned eagerly with the report's own filters so the
    pair and source endpoints work from in-memory bytes; requests never
    touch the filesystem.
    """
    subs: dict[str, Submission] = {}
    for sub in scan(root, selection=report.config.selection).submissions:
        if report.config.content_filter is not None:
            sub = prune(sub, report.config.content_filter)
        subs[sub.id] = sub
    missing = [i for i in report.ids if i not in subs]
    if missing:
        raise SessionError(
            f"serve: report submissions missing from {root}: {', '.join(missing)}"
        )

    streams: dict[tuple[str, str], TokenStream] = {}
    fragment_cache: dict[tuple[str, str, str, int], dict] = {}
    dendro_cache: dict[tuple[str, str], dict] = {}

    app = FastAPI(title="simdetect", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiFault)
    async def _fault(request: Request, exc: ApiFault):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _invalid(request: Request, exc: RequestValidationError):
        return _error(400, "bad_parameter", str(exc.errors()[0].get("msg", exc)))

    @app.exception_handler(Exception)
    async def _boom(request: Request, exc: Exception):
        return _error(500, "internal_error", f"{type(exc).__name__}: {exc}")

    def result_for(test: str):
        try:
            return report.results[test]
        except KeyError:
            raise ApiFault(404, "unknown_test", f"no such test: {test}") from None

    def submission_for(sub_id: str) -> Submission:
        try:
            return subs[sub_id]
        except KeyError:
            raise ApiFault(
                404, "unknown_id", f"no such submission: {sub_id}"
            ) from None

    def stream_for(sub_id: str, language: str) -> TokenStream:
        key = (sub_id, language)
        if key not in streams:
            streams[key] = tokenize(submission_for(sub_id), language)
        return streams[key]

    @app.get("/api/report")
    def api_report():
        results = {}
        for name, res in report.results.items():
            thresholds = {}
            flag_counts = {}
            for fr in res.flag_reports:
                flag_counts[f"{fr.scenario}@{fr.alpha:g}"] = len(fr.flags)
                if fr.scenario == "A":
                    thresholds[f"{fr.alpha:g}"] = fr.threshold_value
            results[name] = {
                "thresholds": thresholds,
                "flag_counts": flag_counts,
                "notices": list(res.notices),
            }
        return {
            "schema_version": report.schema_version,
            "ids": list(report.ids),
            "algorithms": list(report.config.algorithms),
            "alphas": list(report.config.alphas),
            "file_counts": dict(report.file_counts),
            "files": {i: [f.relative_path for f in subs[i].files] for i in report.ids},
            "warnings": list(report.warnings),
            "results": results,
        }

    @app.get("/api/matrix/{test}")
    def api_matrix(test: str):
        return matrix_to_obj(result_for(test).matrix)

    @app.get("/api/histogram/{test}")
    def api_histogram(
        test: str,
        row: str | None = Query(default=None),
        bins: int = Query(default=DEFAULT_BINS),
    ):
        m = result_for(test).matrix
        if bins < 2:
            raise ApiFault(400, "bad_parameter", f"bins must be >= 2, got {bins}")
        if row is None:
            return histogram_to_obj(global_histogram(m, bins))
        if row not in m.ids:
            raise ApiFault(404, "unknown_id", f"no such submission: {row}")
        return histogram_to_obj(row_histogram(m, row, bins))

    @app.get("/api/graph/{test}")
    def api_graph(
        test: str,
        threshold: float = Query(...),
        focus: str | None = Query(default=None),
        hops: int = Query(default=1),
    ):
        m = result_for(test).matrix
        if not 0.0 <= threshold <= 1.0:
            raise ApiFault(
                400, "bad_parameter", f"threshold outside [0, 1]: {threshold}"
            )
        if hops < 0:
            raise ApiFault(400, "bad_parameter", f"hops must be >= 0, got {hops}")
        g = threshold_graph(m, threshold)
        obj = graph_to_obj(g)
        if focus is None:
            return obj
        if focus not in m.ids:
            raise ApiFault(404, "unknown_id", f"no such submission: {focus}")
        adjacent: dict[str, list[str]] = {}
        for e in obj["edges"]:
            adjacent.setdefault(e["a"], []).append(e["b"])
            adjacent.setdefault(e["b"], []).append(e["a"])
        kept = {focus: 0}
        queue = deque([focus])
        while queue:
            v = queue.popleft()
            if kept[v] == hops:
                continue
            for w in adjacent.get(v, ()):
                if w not in kept:
                    kept[w] = kept[v] + 1
                    queue.append(w)
        obj["vertices"] = [v for v in obj["vertices"] if v in kept]
        obj["edges"] = [
            e for e in obj["edges"] if e["a"] in kept and e["b"] in kept
        ]
        return obj

    @app.get("/api/dendrogram/{test}")
    def api_dendrogram(test: str, linkage: str = Query(default="average")):
        if linkage not in LINKAGES:
            raise ApiFault(400, "bad_parameter", f"unknown linkage: {linkage}")
        res = result_for(test)
        key = (test, linkage)
        if key not in dendro_cache:
            if linkage == "average":
                dendro_cache[key] = dendrogram_to_obj(res.dendro)
            else:
                dendro_cache[key] = dendrogram_to_obj(
                    dendrogram(res.matrix, linkage)
                )
        return dendro_cache[key]

    @app.get("/api/flags/{test}")
    def api_flags(test: str, scenario: str = Query(...), alpha: float = Query(...)):
        if scenario not in ("A", "B"):
            raise ApiFault(400, "bad_parameter", f"scenario must be A or B: {scenario}")
        for fr in result_for(test).flag_reports:
            if fr.scenario == scenario and fr.alpha == alpha:
                return _flag_report_to_obj(fr)
        raise ApiFault(
            404,
            "unknown_flag_report",
            f"no flag report for {test} scenario {scenario} alpha {alpha:g}",
        )

    @app.get("/api/pair/{test}/{a}/{b}")
    def api_pair(test: str, a: str, b: str, n: int = Query(default=5)):
        result_for(test)
        if n < 1:
            raise ApiFault(400, "bad_parameter", f"n must be >= 1, got {n}")
        key = (test, a, b, n)
        if key not in fragment_cache:
            base, _ = parse_algorithm(test)
            language = "raw" if base == "ncd_raw" else "c_like"
            mml = (
                MIN_MATCH_RAW
                if language == "raw"
                else report.config.min_match_length
            )
            fs = top_n(
                find_tiles(stream_for(a, language), stream_for(b, language), mml), n
            )
            obj = fragments_to_obj(fs)
            obj["test"] = test
            obj["min_match_length"] = mml
            fragment_cache[key] = obj
        return fragment_cache[key]

    @app.get("/api/source/{sub_id}/{path:path}")
    def api_source(sub_id: str, path: str):
        sub = submission_for(sub_id)
        for f in sub.files:
            if f.relative_path == path:
                return PlainTextResponse(f.text())
        raise ApiFault(404, "unknown_path", f"no such file in {sub_id}: {path}")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
