"""Pipeline orchestration: scan, measure, flag, derive, persist.

A run is a pure function of (corpus root contents, config): scanning and
filtering produce submissions, each configured algorithm produces a
distance matrix, outlier scenarios A and B are applied at the configured
alpha levels, and histogram/dendrogram structures are derived per matrix.
Reports serialize to versioned JSON storing upper triangles only and
round-trip losslessly; wall-clock timings stay in memory.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .compress import CompressorId
from .corpus import CorpusError, FilterQuery, prune, query_from_obj, query_to_obj, scan
from .metrics import (
    ALGORITHMS,
    DistanceMatrix,
    MetricError,
    build_matrix,
    matrix_from_obj,
    matrix_to_obj,
    variance_subtest,
)
from .outliers import (
    DEFAULT_REPLICATES,
    DEFAULT_SEED,
    Flag,
    FlagReport,
    HampelParams,
    flag_scenario_a,
    flag_scenario_b,
)
from .structure import (
    Dendrogram,
    Histogram,
    dendrogram,
    dendrogram_to_obj,
    global_histogram,
    histogram_to_obj,
)

__all__ = [
    "SCHEMA_VERSION",
    "DEFAULT_ALGORITHMS",
    "SessionError",
    "AnalysisConfig",
    "AlgorithmResult",
    "AnalysisReport",
    "run",
    "save",
    "load",
    "config_to_obj",
    "config_from_obj",
    "report_to_obj",
    "report_from_obj",
]

SCHEMA_VERSION = 1

# the variance subtest is a refinement of an existing matrix, so it is
# addressed as "<base>_variance" and requires its base to be listed
DEFAULT_ALGORITHMS = ("ncd_raw", "ncd_tokens", "token_count", "token_count_variance")

VARIANCE_SUFFIX = "_variance"
VARIANCE_ALPHA = 0.05


class SessionError(Exception):
    pass


def parse_algorithm(name: str) -> tuple[str, bool]:
    """(base algorithm, is_variance_refinement) or raise."""
    if name in ALGORITHMS:
        return name, False
    if name.endswith(VARIANCE_SUFFIX) and name[: -len(VARIANCE_SUFFIX)] in ALGORITHMS:
        return name[: -len(VARIANCE_SUFFIX)], True
    raise SessionError(f"unknown algorithm {name!r}")


@dataclass(frozen=True)
class AnalysisConfig:
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    selection: FilterQuery | None = None
    content_filter: FilterQuery | None = None
    alphas: tuple[float, ...] = (0.01, 0.05)
    compressor: CompressorId = CompressorId()
    seed: int = DEFAULT_SEED
    replicates: int = DEFAULT_REPLICATES
    min_match_length: int = 8

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.algorithms:
            raise SessionError("config: need at least one algorithm")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise SessionError("config: duplicate algorithm entries")
        for name in self.algorithms:
            base, is_var = parse_algorithm(name)
            if is_var and base not in self.algorithms:
                raise SessionError(f"config: {name!r} needs its base {base!r} listed")
        if not self.alphas:
            raise SessionError("config: need at least one alpha")
        for a in self.alphas:
            if not 0.0 < a < 0.5:
                raise SessionError(f"config: alpha {a} outside (0, 0.5)")
        if self.min_match_length < 3:
            raise SessionError("config: min_match_length must be >= 3")
        if self.replicates < 10_000:
            raise SessionError("config: replicates must be >= 10000")


@dataclass
class AlgorithmResult:
    matrix: DistanceMatrix
    flag_reports: list[FlagReport]
    histogram: Histogram
    dendro: Dendrogram
    notices: list[str]


@dataclass
class AnalysisReport:
    schema_version: int
    ids: list[str]
    file_counts: dict[str, int]
    warnings: list[str]
    config: AnalysisConfig
    results: dict[str, AlgorithmResult]
    timings: dict[str, float] = field(default_factory=dict, compare=False)


def run(config: AnalysisConfig, root, *, workers: int = 1) -> AnalysisReport:
    timings: dict[str, float] = {}
    t_total = time.perf_counter()

    t = time.perf_counter()
    try:
        scanned = scan(root, selection=config.selection)
        subs = list(scanned.submissions)
        if config.content_filter is not None:
            subs = [prune(s, config.content_filter) for s in subs]
    except CorpusError as e:
        raise SessionError(f"scan: {e}") from e
    timings["scan"] = time.perf_counter() - t
    if len(subs) < 2:
        raise SessionError("analyze: need >=2 submissions")

    matrices: dict[str, DistanceMatrix] = {}
    for name in config.algorithms:
        base, is_var = parse_algorithm(name)
        if is_var:
            continue
        t = time.perf_counter()
        try:
            matrices[name] = build_matrix(
                subs, name, compressor=config.compressor, workers=workers
            )
        except MetricError as e:
            raise SessionError(f"matrix {name}: {e}") from e
        timings[f"matrix:{name}"] = time.perf_counter() - t
    for name in config.algorithms:
        base, is_var = parse_algorithm(name)
        if not is_var:
            continue
        t = time.perf_counter()
        try:
            refined = variance_subtest(matrices[base], alpha_row=VARIANCE_ALPHA)
        except MetricError as e:
            raise SessionError(f"matrix {name}: {e}") from e
        matrices[name] = DistanceMatrix(name, refined.ids, refined.values)
        timings[f"matrix:{name}"] = time.perf_counter() - t

    results: dict[str, AlgorithmResult] = {}
    t = time.perf_counter()
    for name in config.algorithms:
        mat = matrices[name]
        n_pairs = mat.n * (mat.n - 1) // 2
        reports: list[FlagReport] = []
        notices: list[str] = []
        if n_pairs >= 3:
            for alpha in config.alphas:
                p = HampelParams(alpha=alpha, replicates=config.replicates, seed=config.seed)
                reports.append(flag_scenario_a(mat, p))
        else:
            notices.append(
                f"scenario A skipped: {n_pairs} pairwise distance(s), needs at least 3"
            )
        if mat.n >= 4:
            for alpha in config.alphas:
                p = HampelParams(alpha=alpha, replicates=config.replicates, seed=config.seed)
                reports.append(flag_scenario_b(mat, p))
        else:
            notices.append(
                f"scenario B skipped: {mat.n} submissions, needs at least 4"
            )
        results[name] = AlgorithmResult(
            matrix=mat,
            flag_reports=reports,
            histogram=global_histogram(mat),
            dendro=dendrogram(mat),
            notices=notices,
        )
    timings["flags+structures"] = time.perf_counter() - t
    timings["total"] = time.perf_counter() - t_total

    return AnalysisReport(
        schema_version=SCHEMA_VERSION,
        ids=[s.id for s in subs],
        file_counts={s.id: len(s.files) for s in subs},
        warnings=list(scanned.warnings),
        config=config,
        results=results,
        timings=timings,
    )


# ------------------------------------------------------------- encoding


def config_to_obj(c: AnalysisConfig) -> dict:
    return {
        "algorithms": list(c.algorithms),
        "selection": query_to_obj(c.selection) if c.selection is not None else None,
        "content_filter": (
            query_to_obj(c.content_filter) if c.content_filter is not None else None
        ),
        "alphas": list(c.alphas),
        "compressor": {"name": c.compressor.name, "level": c.compressor.level},
        "seed": c.seed,
        "replicates": c.replicates,
        "min_match_length": c.min_match_length,
    }


def config_from_obj(obj) -> AnalysisConfig:
    if not isinstance(obj, dict):
        raise SessionError("config: expected a JSON object")
    known = {
        "algorithms", "selection", "content_filter", "alphas",
        "compressor", "seed", "replicates", "min_match_length",
    }
    extra = set(obj) - known
    if extra:
        raise SessionError(f"config: unknown key(s) {sorted(extra)}")
    kwargs: dict = {}
    try:
        if obj.get("algorithms") is not None:
            kwargs["algorithms"] = tuple(obj["algorithms"])
        for key in ("selection", "content_filter"):
            if obj.get(key) is not None:
                kwargs[key] = query_from_obj(obj[key])
        if obj.get("alphas") is not None:
            kwargs["alphas"] = tuple(obj["alphas"])
        if obj.get("compressor") is not None:
            comp = obj["compressor"]
            kwargs["compressor"] = CompressorId(
                comp.get("name", "deflate"), comp.get("level", 9)
            )
        for key in ("seed", "replicates", "min_match_length"):
            if obj.get(key) is not None:
                kwargs[key] = int(obj[key])
    except (CorpusError, ValueError, TypeError) as e:
        raise SessionError(f"config: {e}") from e
    return AnalysisConfig(**kwargs)


def _flag_to_obj(f: Flag) -> dict:
    return {
        "pair": list(f.pair),
        "distance": f.distance,
        "score": None if f.score == float("inf") else f.score,
        "row": f.row,
    }


def _flag_from_obj(obj) -> Flag:
    score = float("inf") if obj["score"] is None else float(obj["score"])
    return Flag(tuple(obj["pair"]), float(obj["distance"]), score, obj.get("row"))


def _flag_report_to_obj(r: FlagReport) -> dict:
    return {
        "scenario": r.scenario,
        "alpha": r.alpha,
        "threshold_value": r.threshold_value,
        "flags": [_flag_to_obj(f) for f in r.flags],
    }


def _flag_report_from_obj(obj) -> FlagReport:
    return FlagReport(
        scenario=obj["scenario"],
        alpha=float(obj["alpha"]),
        threshold_value=obj["threshold_value"],
        flags=[_flag_from_obj(f) for f in obj["flags"]],
    )


def report_to_obj(r: AnalysisReport) -> dict:
    return {
        "schema_version": r.schema_version,
        "corpus": {
            "ids": list(r.ids),
            "file_counts": dict(r.file_counts),
            "warnings": list(r.warnings),
        },
        "config": config_to_obj(r.config),
        "results": {
            name: {
                "matrix": matrix_to_obj(res.matrix),
                "flag_reports": [_flag_report_to_obj(fr) for fr in res.flag_reports],
                "histogram": histogram_to_obj(res.histogram),
                "dendrogram": dendrogram_to_obj(res.dendro),
                "notices": list(res.notices),
            }
            for name, res in r.results.items()
        },
    }


def report_from_obj(obj) -> AnalysisReport:
    if not isinstance(obj, dict):
        raise SessionError("report: expected a JSON object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise SessionError(
            f"unsupported report version {obj.get('schema_version')!r}, "
            f"expected {SCHEMA_VERSION}"
        )
    try:
        config = config_from_obj(obj["config"])
        corpus = obj["corpus"]
        results: dict[str, AlgorithmResult] = {}
        for name in config.algorithms:
            body = obj["results"][name]
            hist = body["histogram"]
            dend = body["dendrogram"]
            results[name] = AlgorithmResult(
                matrix=matrix_from_obj(body["matrix"]),
                flag_reports=[_flag_report_from_obj(fr) for fr in body["flag_reports"]],
                histogram=Histogram(
                    hist["bins"], tuple(hist["counts"]), hist["total"]
                ),
                dendro=Dendrogram(
                    dend["linkage"],
                    tuple((int(a), int(b), float(h)) for a, b, h in dend["merges"]),
                    tuple(dend["leaf_order"]),
                ),
                notices=list(body["notices"]),
            )
        return AnalysisReport(
            schema_version=SCHEMA_VERSION,
            ids=list(corpus["ids"]),
            file_counts={k: int(v) for k, v in corpus["file_counts"].items()},
            warnings=list(corpus["warnings"]),
            config=config,
            results=results,
        )
    except (KeyError, TypeError, ValueError, MetricError) as e:
        raise SessionError(f"report: malformed content: {e!r}") from e


def save(r: AnalysisReport, path) -> None:
    Path(path).write_text(
        json.dumps(report_to_obj(r), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def load(path) -> AnalysisReport:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as e:
        raise SessionError(f"report: invalid JSON: {e}") from e
    return report_from_obj(obj)
