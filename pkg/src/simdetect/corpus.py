"""Corpus ingestion: turn a directory of hand-ins into submissions.

Each top-level entry of the scan root -- a folder, or a zip/jar/tar/tar.gz
archive -- is a submission candidate.  Archives are expanded entirely in
memory and treated like folders; archives nested inside other archives or
folders are expanded up to a configurable depth.  A boolean filter query
(and/or/nor over archive-name, folder-name, path and content regex atoms)
decides which candidates become submissions, and a second filter pass can
prune individual files from a submission.

Selection runs first, pruning second.  At the selection stage the name atoms
test the candidate entry itself (a folder atom is false for an archive entry
and vice versa, the path atom tests the entry's name under the root) and the
content atom is true when any contained file matches.  At the pruning stage
all atoms test one file at a time against its submission's context.
"""
from __future__ import annotations

import io
import re
import tarfile
import zipfile
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "CorpusError",
    "DuplicateIdError",
    "FullyPrunedError",
    "SourceFile",
    "Submission",
    "EvalContext",
    "FilterQuery",
    "PathMatches",
    "FolderNameMatches",
    "ArchiveNameMatches",
    "ContentMatches",
    "And",
    "Or",
    "Nor",
    "ScanResult",
    "scan",
    "prune",
    "evaluate",
    "query_to_obj",
    "query_from_obj",
]

DEFAULT_MAX_FILE_BYTES = 4 * 1024 * 1024
DEFAULT_ARCHIVE_DEPTH = 2

_ZIP_EXTS = (".zip", ".jar")
_TAR_EXTS = (".tar", ".tar.gz", ".tgz")
# Formats we recognize as archives but refuse to open.
_UNSUPPORTED_EXTS = (".rar", ".7z", ".xz", ".bz2", ".zst", ".gz")


class CorpusError(Exception):
    """Any corpus ingestion or filter construction failure."""


class DuplicateIdError(CorpusError):
    def __init__(self, sub_id: str, origin_a: str, origin_b: str):
        super().__init__(
            f"duplicate submission id {sub_id!r}: {origin_a} and {origin_b}"
        )
        self.submission_id = sub_id
        self.origins = (origin_a, origin_b)


class FullyPrunedError(CorpusError):
    def __init__(self, sub_id: str):
        super().__init__(f"submission fully pruned: {sub_id!r}")
        self.submission_id = sub_id


def _archive_kind(name: str) -> str | None:
    low = name.lower()
    if low.endswith(_ZIP_EXTS):
        return "zip"
    if low.endswith(_TAR_EXTS):
        return "tar"
    return None


def _strip_archive_ext(name: str) -> str:
    low = name.lower()
    for ext in _ZIP_EXTS + _TAR_EXTS:
        if low.endswith(ext):
            return name[: -len(ext)]
    return name


@dataclass(frozen=True)
class SourceFile:
    """One file of a submission; the path is relative to the submission."""

    relative_path: str
    data: bytes

    def __post_init__(self):
        if not self.relative_path:
            raise CorpusError("empty relative path")
        if "\\" in self.relative_path:
            raise CorpusError(f"backslash in relative path: {self.relative_path!r}")
        parts = self.relative_path.split("/")
        if any(seg in ("", ".", "..") for seg in parts):
            raise CorpusError(f"unsafe relative path: {self.relative_path!r}")

    @property
    def size(self) -> int:
        return len(self.data)

    def text(self) -> str:
        return self.data.decode("utf-8", errors="replace")


@dataclass(frozen=True)
class Submission:
    id: str
    origin: str
    files: tuple[SourceFile, ...]

    def __post_init__(self):
        if not self.files:
            raise CorpusError(f"submission {self.id!r} has no files")
        paths = [f.relative_path for f in self.files]
        if len(set(paths)) != len(paths):
            raise CorpusError(f"submission {self.id!r} has duplicate file paths")
        if paths != sorted(paths):
            raise CorpusError(f"submission {self.id!r} files not in path order")

    def file_paths(self) -> list[str]:
        return [f.relative_path for f in self.files]


@dataclass(frozen=True)
class EvalContext:
    """Submission-level facets a file is judged against while pruning."""

    archive_name: str | None = None
    folder_name: str | None = None


def _compile(regex: str) -> re.Pattern:
    try:
        return re.compile(regex)
    except re.error as exc:
        raise CorpusError(f"bad filter regex {regex!r}: {exc}") from exc


class FilterQuery:
    """Base of the query tree.  Nodes are immutable after construction."""

    def matches_file(self, file: SourceFile, ctx: EvalContext) -> bool:
        raise NotImplementedError

    def matches_entry(self, entry: "_Entry") -> bool:
        raise NotImplementedError

    def decide_file(self, file: SourceFile, ctx: EvalContext) -> tuple[bool, str]:
        """Like matches_file but also names the atom that settled the answer."""
        raise NotImplementedError


class _Atom(FilterQuery):
    facet = ""

    def __init__(self, regex: str):
        self.regex = regex
        self._rx = _compile(regex)

    def __repr__(self):
        return f"{type(self).__name__}({self.regex!r})"

    def __eq__(self, other):
        return type(other) is type(self) and other.regex == self.regex

    def __hash__(self):
        return hash((type(self), self.regex))

    def _desc(self, hit: bool) -> str:
        verb = "matched" if hit else "did not match"
        return f"{self.facet}~{self.regex!r} {verb}"

    def decide_file(self, file: SourceFile, ctx: EvalContext) -> tuple[bool, str]:
        hit = self.matches_file(file, ctx)
        return hit, self._desc(hit)


class PathMatches(_Atom):
    facet = "path"

    def matches_file(self, file, ctx):
        return self._rx.search(file.relative_path) is not None

    def matches_entry(self, entry):
        return self._rx.search(entry.name) is not None


class FolderNameMatches(_Atom):
    facet = "folder"

    def matches_file(self, file, ctx):
        return ctx.folder_name is not None and self._rx.search(ctx.folder_name) is not None

    def matches_entry(self, entry):
        return entry.kind == "folder" and self._rx.search(entry.name) is not None


class ArchiveNameMatches(_Atom):
    facet = "archive"

    def matches_file(self, file, ctx):
        return ctx.archive_name is not None and self._rx.search(ctx.archive_name) is not None

    def matches_entry(self, entry):
        return entry.kind == "archive" and self._rx.search(entry.name) is not None


class ContentMatches(_Atom):
    facet = "content"

    def matches_file(self, file, ctx):
        return self._rx.search(file.text()) is not None

    def matches_entry(self, entry):
        return any(self._rx.search(f.text()) is not None for f in entry.files)


class _Composite(FilterQuery):
    op = ""

    def __init__(self, children):
        children = list(children)
        if not children:
            raise CorpusError(f"{self.op!r} query needs at least one child")
        if not all(isinstance(c, FilterQuery) for c in children):
            raise CorpusError(f"{self.op!r} children must be filter queries")
        self.children = children

    def __repr__(self):
        return f"{type(self).__name__}({self.children!r})"

    def __eq__(self, other):
        return type(other) is type(self) and other.children == self.children

    def __hash__(self):
        return hash((type(self), tuple(self.children)))


class And(_Composite):
    op = "and"

    def matches_file(self, file, ctx):
        return all(c.matches_file(file, ctx) for c in self.children)

    def matches_entry(self, entry):
        return all(c.matches_entry(entry) for c in self.children)

    def decide_file(self, file, ctx):
        for c in self.children:
            hit, why = c.decide_file(file, ctx)
            if not hit:
                return False, why
        return True, f"all {len(self.children)} condition(s) held"


class Or(_Composite):
    op = "or"

    def matches_file(self, file, ctx):
        return any(c.matches_file(file, ctx) for c in self.children)

    def matches_entry(self, entry):
        return any(c.matches_entry(entry) for c in self.children)

    def decide_file(self, file, ctx):
        for c in self.children:
            hit, why = c.decide_file(file, ctx)
            if hit:
                return True, why
        return False, "no condition held"


class Nor(_Composite):
    op = "nor"

    def matches_file(self, file, ctx):
        return not any(c.matches_file(file, ctx) for c in self.children)

    def matches_entry(self, entry):
        return not any(c.matches_entry(entry) for c in self.children)

    def decide_file(self, file, ctx):
        for c in self.children:
            hit, why = c.decide_file(file, ctx)
            if hit:
                return False, f"excluded: {why}"
        return True, "no excluded condition held"


def evaluate(query: FilterQuery, file: SourceFile, ctx: EvalContext) -> bool:
    return query.matches_file(file, ctx)


_ATOMS = {
    "path": PathMatches,
    "folder": FolderNameMatches,
    "archive": ArchiveNameMatches,
    "content": ContentMatches,
}
_OPS = {"and": And, "or": Or, "nor": Nor}


def query_to_obj(query: FilterQuery):
    """Canonical JSON-ready encoding of a query tree."""
    if isinstance(query, _Atom):
        return {"atom": query.facet, "regex": query.regex}
    if isinstance(query, _Composite):
        return {"op": query.op, "children": [query_to_obj(c) for c in query.children]}
    raise CorpusError(f"not a filter query: {query!r}")


def query_from_obj(obj) -> FilterQuery:
    if not isinstance(obj, dict):
        raise CorpusError(f"filter query must be an object, got {type(obj).__name__}")
    if "atom" in obj:
        kind = obj["atom"]
        if kind not in _ATOMS:
            raise CorpusError(f"unknown filter atom {kind!r}")
        regex = obj.get("regex")
        if not isinstance(regex, str):
            raise CorpusError(f"filter atom {kind!r} needs a string regex")
        return _ATOMS[kind](regex)
    if "op" in obj:
        op = obj["op"]
        if op not in _OPS:
            raise CorpusError(f"unknown filter operator {op!r}")
        children = obj.get("children")
        if not isinstance(children, list):
            raise CorpusError(f"filter operator {op!r} needs a children list")
        return _OPS[op]([query_from_obj(c) for c in children])
    raise CorpusError("filter query object needs an 'atom' or 'op' key")


@dataclass
class _Entry:
    """A submission candidate: one top-level folder or archive."""

    name: str  # base name under the root, extension kept for archives
    kind: str  # "folder" | "archive"
    origin: str
    files: list[SourceFile]


@dataclass
class ScanResult:
    submissions: list[Submission]
    warnings: list[str]


def scan(
    root,
    selection: FilterQuery | None = None,
    *,
    archive_depth: int = DEFAULT_ARCHIVE_DEPTH,
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES,
) -> ScanResult:
    """Collect submissions under `root`, honoring the selection query.

    `selection=None` selects every candidate.  Warnings (oversized or unsafe
    files, corrupt or unsupported archives, empty candidates) are returned,
    not raised; only an unreadable root and duplicate submission ids are hard
    errors.  Output is sorted by submission id and is deterministic for a
    fixed tree.
    """
    rootp = Path(root)
    if not rootp.is_dir():
        raise CorpusError(f"scan root is not a readable directory: {root}")

    warnings: list[str] = []
    entries: list[_Entry] = []
    for child in sorted(rootp.iterdir(), key=lambda p: p.name):
        if child.is_dir():
            files = _load_folder(child, archive_depth, max_file_bytes, warnings)
            entries.append(_Entry(child.name, "folder", str(child), files))
        elif child.is_file():
            if _archive_kind(child.name):
                files = _extract_archive(
                    child.read_bytes(), child.name, 1,
                    archive_depth, max_file_bytes, warnings,
                )
                entries.append(_Entry(child.name, "archive", str(child), files))
            elif child.name.lower().endswith(_UNSUPPORTED_EXTS):
                warnings.append(f"unsupported archive format, skipped: {child.name}")
            # other stray top-level files are not submission candidates

    selected = [e for e in entries if selection is None or selection.matches_entry(e)]

    by_id: dict[str, _Entry] = {}
    submissions = []
    for entry in selected:
        if not entry.files:
            warnings.append(f"candidate {entry.name!r} yielded no files, skipped")
            continue
        sub_id = _strip_archive_ext(entry.name) if entry.kind == "archive" else entry.name
        if sub_id in by_id:
            raise DuplicateIdError(sub_id, by_id[sub_id].origin, entry.origin)
        by_id[sub_id] = entry
        files = tuple(sorted(entry.files, key=lambda f: f.relative_path))
        submissions.append(Submission(sub_id, entry.origin, files))
    submissions.sort(key=lambda s: s.id)
    return ScanResult(submissions, warnings)


def _safe_relpath(raw: str) -> str | None:
    path = raw.replace("\\", "/").lstrip("/")
    parts = [seg for seg in path.split("/") if seg not in ("", ".")]
    if not parts or ".." in parts:
        return None
    return "/".join(parts)


def _add_file(
    out: dict[str, SourceFile],
    rel: str,
    data: bytes,
    where: str,
    depth: int,
    archive_depth: int,
    max_file_bytes: int,
    warnings: list[str],
):
    if len(data) > max_file_bytes:
        warnings.append(f"file too large ({len(data)} bytes), skipped: {where}/{rel}")
        return
    if _archive_kind(rel):
        if depth < archive_depth:
            for inner_rel, inner_data in _extract_flat(
                data, rel, depth + 1, archive_depth, max_file_bytes, warnings, where
            ):
                _put(out, f"{rel}/{inner_rel}", inner_data, where, warnings)
        else:
            warnings.append(f"nested archive beyond depth {archive_depth}, skipped: {where}/{rel}")
        return
    _put(out, rel, data, where, warnings)


def _put(out: dict[str, SourceFile], rel: str, data: bytes, where: str, warnings: list[str]):
    if rel in out:
        warnings.append(f"duplicate path inside candidate, first kept: {where}/{rel}")
        return
    out[rel] = SourceFile(rel, data)


def _extract_flat(
    data: bytes,
    name: str,
    depth: int,
    archive_depth: int,
    max_file_bytes: int,
    warnings: list[str],
    where: str,
) -> list[tuple[str, bytes]]:
    """Expand one nested archive into (relative path, bytes) pairs."""
    inner: dict[str, SourceFile] = {}
    for rel, blob in _read_archive_members(data, name, warnings, f"{where}/{name}"):
        _add_file(inner, rel, blob, f"{where}/{name}", depth, archive_depth, max_file_bytes, warnings)
    return sorted((f.relative_path, f.data) for f in inner.values())


def _extract_archive(
    data: bytes,
    name: str,
    depth: int,
    archive_depth: int,
    max_file_bytes: int,
    warnings: list[str],
) -> list[SourceFile]:
    out: dict[str, SourceFile] = {}
    for rel, blob in _read_archive_members(data, name, warnings, name):
        _add_file(out, rel, blob, name, depth, archive_depth, max_file_bytes, warnings)
    return sorted(out.values(), key=lambda f: f.relative_path)


def _read_archive_members(
    data: bytes, name: str, warnings: list[str], where: str
) -> list[tuple[str, bytes]]:
    kind = _archive_kind(name)
    members: list[tuple[str, bytes]] = []
    try:
        if kind == "zip":
            with zipfile.ZipFile(io.BytesIO(data)) as zf:
                for info in sorted(zf.infolist(), key=lambda i: i.filename):
                    if info.is_dir():
                        continue
                    rel = _safe_relpath(info.filename)
                    if rel is None:
                        warnings.append(f"unsafe member path, skipped: {where}:{info.filename!r}")
                        continue
                    try:
                        members.append((rel, zf.read(info)))
                    except (RuntimeError, zipfile.BadZipFile) as exc:
                        warnings.append(f"unreadable member, skipped: {where}:{rel} ({exc})")
        elif kind == "tar":
            with tarfile.open(fileobj=io.BytesIO(data), mode="r:*") as tf:
                for member in sorted(tf.getmembers(), key=lambda m: m.name):
                    if not member.isfile():
                        continue
                    rel = _safe_relpath(member.name)
                    if rel is None:
                        warnings.append(f"unsafe member path, skipped: {where}:{member.name!r}")
                        continue
                    fh = tf.extractfile(member)
                    if fh is None:
                        continue
                    members.append((rel, fh.read()))
        else:
            warnings.append(f"unsupported archive format, skipped: {where}")
    except (zipfile.BadZipFile, tarfile.TarError, EOFError, OSError) as exc:
        warnings.append(f"corrupt archive, skipped: {where} ({exc})")
        return []
    return members


def _load_folder(
    folder: Path, archive_depth: int, max_file_bytes: int, warnings: list[str]
) -> list[SourceFile]:
    out: dict[str, SourceFile] = {}
    paths = sorted(p for p in folder.rglob("*") if p.is_file())
    for path in paths:
        rel = path.relative_to(folder).as_posix()
        safe = _safe_relpath(rel)
        if safe is None:
            warnings.append(f"unsafe path, skipped: {folder.name}/{rel}")
            continue
        # a folder is the depth-0 container, so archives inside it start at depth 1
        _add_file(out, safe, path.read_bytes(), folder.name, 1, archive_depth, max_file_bytes, warnings)
    return sorted(out.values(), key=lambda f: f.relative_path)


def _origin_context(sub: Submission) -> EvalContext:
    base = sub.origin.rstrip("/").rsplit("/", 1)[-1]
    if _archive_kind(base):
        return EvalContext(archive_name=base, folder_name=None)
    return EvalContext(archive_name=None, folder_name=base)


def prune(sub: Submission, content_filter: FilterQuery) -> Submission:
    """Keep exactly the files the filter accepts; error if nothing is left."""
    ctx = _origin_context(sub)
    kept = tuple(f for f in sub.files if content_filter.matches_file(f, ctx))
    if not kept:
        raise FullyPrunedError(sub.id)
    return Submission(sub.id, sub.origin, kept)


def explain(sub: Submission, content_filter: FilterQuery | None) -> list[tuple[str, bool, str]]:
    """Per-file include/exclude decisions with the deciding atom, for the CLI."""
    ctx = _origin_context(sub)
    rows = []
    for f in sub.files:
        if content_filter is None:
            rows.append((f.relative_path, True, "no content filter"))
        else:
            hit, why = content_filter.decide_file(f, ctx)
            rows.append((f.relative_path, hit, why))
    return rows
