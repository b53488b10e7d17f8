"""Command-line front end.

Subcommands cover the whole workflow: scan (inspect corpus filtering),
analyze (full pipeline to report.json), pair (fragment listing for two
submissions), synth (labeled benchmark generation), calibrate (critical
value table) and serve (local API + UI host).

Exit codes are a stable contract: 0 success, 1 runtime failure,
2 usage or configuration error.  `--json` switches stdout to
machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import CorpusError, scan as scan_corpus, prune, explain
from .fragments import MIN_MATCH_RAW, find_tiles, fragments_to_obj, top_n
from .lexer import tokenize
from .outliers import DEFAULT_REPLICATES, DEFAULT_SEED as HAMPEL_SEED, calibrate_table
from .session import AnalysisConfig, SessionError, config_from_obj, load, run, save
from .synth import DEFAULT_SEED as SYNTH_SEED, generate_corpus, write_corpus

__all__ = ["main"]

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config(path: str | None) -> AnalysisConfig:
    if path is None:
        return AnalysisConfig()
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise SessionError(f"config: cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise SessionError(f"config: invalid JSON in {path}: {e}") from e
    return config_from_obj(obj)


def _emit(args, obj: dict, human: str) -> None:
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(human, end="" if human.endswith("\n") else "\n")


def _cmd_scan(args) -> int:
    try:
        cfg = _load_config(args.config)
    except SessionError as e:
        return _fail(USAGE_ERROR, str(e))
    try:
        result = scan_corpus(args.root, selection=cfg.selection)
    except CorpusError as e:
        return _fail(USAGE_ERROR, f"scan: {e}")
    if not result.submissions:
        return _fail(USAGE_ERROR, f"scan: no submissions under {args.root}")

    payload = {"warnings": list(result.warnings), "submissions": []}
    lines: list[str] = []
    for sub in result.submissions:
        rows = explain(sub, cfg.content_filter) if args.explain else None
        entry = {"id": sub.id, "origin": sub.origin, "files": len(sub.files)}
        lines.append(f"{sub.id}  ({len(sub.files)} file(s))  {sub.origin}")
        if rows is not None:
            entry["files"] = [
                {"path": path, "included": ok, "why": why} for path, ok, why in rows
            ]
            for path, ok, why in rows:
                lines.append(f"  {'+' if ok else '-'} {path}  [{why}]")
        payload["submissions"].append(entry)
    for w in result.warnings:
        lines.append(f"warning: {w}")
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_analyze(args) -> int:
    try:
        cfg = _load_config(args.config)
    except SessionError as e:
        return _fail(USAGE_ERROR, str(e))
    try:
        report = run(cfg, args.root, workers=args.workers)
        save(report, args.out)
    except SessionError as e:
        return _fail(RUNTIME_ERROR, str(e))
    except OSError as e:
        return _fail(RUNTIME_ERROR, f"write {args.out}: {e.strerror}")

    summary = {}
    lines = [f"report written to {args.out} ({len(report.ids)} submissions)"]
    for name, res in report.results.items():
        entry: dict = {"flags": {}}
        for fr in res.flag_reports:
            key = f"{fr.scenario}@{fr.alpha:g}"
            entry["flags"][key] = len(fr.flags)
            if fr.scenario == "A":
                entry.setdefault("threshold", {})[f"{fr.alpha:g}"] = fr.threshold_value
                lines.append(
                    f"{name}: scenario A alpha={fr.alpha:g} "
                    f"threshold={fr.threshold_value:.6f} flags={len(fr.flags)}"
                )
        for notice in res.notices:
            lines.append(f"{name}: {notice}")
            entry.setdefault("notices", []).append(notice)
        summary[name] = entry
    _emit(args, {"out": str(args.out), "ids": report.ids, "results": summary}, "\n".join(lines))
    return 0


def _cmd_pair(args) -> int:
    try:
        cfg = _load_config(args.config)
    except SessionError as e:
        return _fail(USAGE_ERROR, str(e))
    if args.report is not None:
        try:
            report = load(args.report)
        except (SessionError, OSError) as e:
            return _fail(RUNTIME_ERROR, f"report: {e}")
        cfg = report.config
        for sub_id in (args.a, args.b):
            if sub_id not in report.ids:
                return _fail(USAGE_ERROR, f"unknown submission id {sub_id!r}")
    try:
        result = scan_corpus(args.root, selection=cfg.selection)
        subs = {s.id: s for s in result.submissions}
        if cfg.content_filter is not None:
            subs = {i: prune(s, cfg.content_filter) for i, s in subs.items()}
    except CorpusError as e:
        return _fail(RUNTIME_ERROR, f"scan: {e}")
    missing = [i for i in (args.a, args.b) if i not in subs]
    if missing:
        return _fail(USAGE_ERROR, f"unknown submission id {missing[0]!r}")

    language = "raw" if args.test == "ncd_raw" else "c_like"
    default_mml = MIN_MATCH_RAW if language == "raw" else cfg.min_match_length
    mml = args.min_match if args.min_match is not None else default_mml
    try:
        fs = find_tiles(
            tokenize(subs[args.a], language), tokenize(subs[args.b], language), mml
        )
        fs = top_n(fs, args.n)
    except ValueError as e:
        return _fail(USAGE_ERROR, str(e))

    obj = fragments_to_obj(fs)
    obj["test"] = args.test
    obj["min_match_length"] = mml
    lines = [
        f"pair {args.a} / {args.b}  test={args.test} min_match={mml}",
        f"coverage {fs.coverage:.4f} with {len(fs.tiles)} tile(s) shown",
    ]
    for rank, tile in enumerate(fs.tiles, 1):
        a_files = subs[args.a].files
        b_files = subs[args.b].files
        a_part = ", ".join(
            f"{a_files[fi].relative_path}[{s}:{e}]" for fi, s, e in tile.a_bytes
        )
        b_part = ", ".join(
            f"{b_files[fi].relative_path}[{s}:{e}]" for fi, s, e in tile.b_bytes
        )
        lines.append(f"  {rank}. {tile.length} tokens  {a_part}  |  {b_part}")
    _emit(args, obj, "\n".join(lines))
    return 0


def _cmd_synth(args) -> int:
    try:
        subs, gt = generate_corpus(args.orig, args.mut, args.rec, seed=args.seed)
    except ValueError as e:
        return _fail(USAGE_ERROR, str(e))
    try:
        write_corpus(subs, gt, args.out)
    except OSError as e:
        return _fail(RUNTIME_ERROR, f"write {args.out}: {e.strerror}")
    obj = {
        "out": str(args.out),
        "submissions": [s.id for s in subs],
        "plagiarized": list(gt.plagiarized()),
    }
    _emit(
        args,
        obj,
        f"wrote {len(subs)} submissions to {args.out} "
        f"({len(gt.plagiarized())} plagiarized, ground_truth.json included)",
    )
    return 0


def _cmd_calibrate(args) -> int:
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
        alpha_list = [float(x) for x in args.alpha_list.split(",") if x.strip()]
        if not n_list or not alpha_list:
            raise ValueError("empty list")
        table = calibrate_table(n_list, alpha_list, args.replicates, args.seed)
    except ValueError as e:
        return _fail(USAGE_ERROR, f"calibrate: {e}")
    text = json.dumps(table, indent=2, sort_keys=True)
    if args.out:
        try:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            return _fail(RUNTIME_ERROR, f"write {args.out}: {e.strerror}")
        _emit(args, {"out": str(args.out), "entries": len(table)},
              f"wrote {len(table)} critical value(s) to {args.out}")
    else:
        print(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import build_app

    try:
        report = load(args.report)
    except (SessionError, OSError) as e:
        return _fail(RUNTIME_ERROR, f"report: {e}")
    static = Path("frontend/dist")
    try:
        app = build_app(
            report, args.root, static_dir=static if static.is_dir() else None
        )
    except (SessionError, CorpusError) as e:
        return _fail(RUNTIME_ERROR, str(e))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simdetect",
        description="Source-submission similarity analysis toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable stdout")

    p = sub.add_parser("scan", parents=[common], help="list submissions and filter decisions")
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--config", default=None, help="analysis.json with filters")
    p.add_argument("--explain", action="store_true", help="show per-file decisions")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("analyze", parents=[common], help="run the full pipeline")
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default="report.json", type=Path)
    p.add_argument("--workers", default=1, type=int)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("pair", parents=[common], help="fragment listing for two submissions")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--report", default=None, help="report.json for config echo and id check")
    p.add_argument("--config", default=None)
    p.add_argument("--test", default="ncd_tokens",
                   choices=["ncd_raw", "ncd_tokens", "token_count"])
    p.add_argument("--n", default=5, type=int, help="number of tiles to keep")
    p.add_argument("--min-match", default=None, type=int, dest="min_match")
    p.set_defaults(func=_cmd_pair)

    p = sub.add_parser("synth", parents=[common], help="generate a labeled benchmark corpus")
    p.add_argument("--orig", default=30, type=int)
    p.add_argument("--mut", default=6, type=int)
    p.add_argument("--rec", default=8, type=int)
    p.add_argument("--seed", default=SYNTH_SEED, type=int)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("calibrate", parents=[common], help="critical-value table")
    p.add_argument("--n-list", required=True, dest="n_list")
    p.add_argument("--alpha-list", default="0.01,0.05", dest="alpha_list")
    p.add_argument("--replicates", default=DEFAULT_REPLICATES, type=int)
    p.add_argument("--seed", default=HAMPEL_SEED, type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("serve", parents=[common], help="serve report API and UI")
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--port", default=8000, type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
