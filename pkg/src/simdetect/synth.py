"""Labeled synthetic corpora for validation runs.

Originals are independent programs drawn from a small expression-statement
template grammar (C-like, single main.c each).  Plagiarisms come in two
flavors: mutational (per-token rename / literal tweak / statement swap /
spurious insertion) and recombination (crossover of two parents at
statement boundaries).  Everything is driven by counter-based RNG
substreams, so a corpus is a pure function of its seed.

Naming follows the benchmark convention: originals P1..Pk, mutants MPx,
recombinants PxRGPy (one-point crossover) and PxRFPy (two-point).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .corpus import SourceFile, Submission
from .lexer import FLOAT_LIT, IDENT, INT_LIT, _KEYWORDS, tokenize

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_RATE",
    "Label",
    "GroundTruth",
    "generate_corpus",
    "mutate",
    "recombine",
    "well_formed",
    "write_corpus",
    "ground_truth_to_obj",
    "ground_truth_from_obj",
]

DEFAULT_SEED = 7
DEFAULT_RATE = 0.1

_STEMS = (
    "acc", "bias", "delta", "drift", "flux", "gain", "load", "mass",
    "norm", "pulse", "rate", "scale", "shift", "span", "trend", "depth",
)
assert not set(_STEMS) & set(_KEYWORDS)

# identifiers legitimately outside a program's own declarations
_AMBIENT = {"include", "stdio", "math", "h", "main", "printf", "sqrt", "fabs", "i"}

_KINDS = ("original", "mutational", "recombination")


@dataclass(frozen=True)
class Label:
    kind: str
    sources: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown label kind {self.kind!r}")
        want = {"original": 0, "mutational": 1, "recombination": 2}[self.kind]
        if len(self.sources) != want:
            raise ValueError(f"{self.kind} label needs {want} source(s)")


@dataclass(frozen=True)
class GroundTruth:
    """Who copied from whom, and how."""

    labels: dict[str, Label]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        originals = {i for i, lab in self.labels.items() if lab.kind == "original"}
        for sub_id, lab in self.labels.items():
            for src in lab.sources:
                if src not in originals:
                    raise ValueError(f"{sub_id} references non-original source {src!r}")
        for a, b, rel in self.edges:
            if rel not in ("direct", "source-of", "indirect"):
                raise ValueError(f"unknown relation {rel!r}")
            if a not in self.labels or b not in self.labels:
                raise ValueError(f"edge ({a}, {b}) references unknown id")

    def plagiarized(self) -> tuple[str, ...]:
        return tuple(i for i, lab in self.labels.items() if lab.kind != "original")

    def sources_of(self, sub_id: str) -> tuple[str, ...]:
        return self.labels[sub_id].sources


def _rng(seed: int, *spawn_key: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seq))


def _child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


# ---------------------------------------------------------------- grammar


def _float_lit(rng: np.random.Generator) -> str:
    return f"{rng.uniform(0.1, 9.9):.2f}"


def _int_lit(rng: np.random.Generator) -> str:
    return str(int(rng.integers(2, 64)))


def _operand(rng: np.random.Generator, names: list[str]) -> str:
    if rng.random() < 0.6:
        return names[int(rng.integers(len(names)))]
    return _float_lit(rng)


def _expr(rng: np.random.Generator, names: list[str]) -> str:
    terms = int(rng.integers(2, 5))
    parts = [_operand(rng, names)]
    for _ in range(terms - 1):
        op = ("+", "-", "*")[int(rng.integers(3))]
        parts += [op, _operand(rng, names)]
    body = " ".join(parts)
    if rng.random() < 0.3:
        return f"({body}) / {_float_lit(rng)}"
    return body


def _statement(rng: np.random.Generator, names: list[str]) -> str:
    t = names[int(rng.integers(len(names)))]
    a = names[int(rng.integers(len(names)))]
    b = names[int(rng.integers(len(names)))]
    kind = int(rng.integers(8))
    if kind == 0:
        return f"{t} = {_expr(rng, names)};"
    if kind == 1:
        op = ("+", "-", "*")[int(rng.integers(3))]
        return f"{t} {op}= {_expr(rng, names)};"
    if kind == 2:
        return f"if ({a} > {_float_lit(rng)}) {{ {t} = {_expr(rng, names)}; }}"
    if kind == 3:
        op = ("+", "-")[int(rng.integers(2))]
        return f"if ({a} < {b}) {{ {t} {op}= {_float_lit(rng)}; }}"
    if kind == 4:
        return (
            f"for (int i = 0; i < {_int_lit(rng)}; i++)"
            f" {{ {t} += {_operand(rng, names)} * i; }}"
        )
    if kind == 5:
        return f"while ({t} > {_float_lit(rng)}) {{ {t} -= {_float_lit(rng)}; }}"
    if kind == 6:
        return f"{t} = sqrt(fabs({a}) + {_float_lit(rng)});"
    return f"{t} = ({a} + {b}) * {_float_lit(rng)} - {_expr(rng, names)};"


def _fresh_names(rng: np.random.Generator, k: int, used: set[str]) -> list[str]:
    names: list[str] = []
    while len(names) < k:
        stem = _STEMS[int(rng.integers(len(_STEMS)))]
        name = f"{stem}{int(rng.integers(1, 10))}"
        if name not in names and name not in used:
            names.append(name)
    return names


def _program_text(rng: np.random.Generator) -> str:
    k = int(rng.integers(5, 9))
    names = _fresh_names(rng, k, set(_AMBIENT))
    lines = [
        f"/* workload unit {int(rng.integers(1, 1_000_000))} */",
        "#include <stdio.h>",
        "#include <math.h>",
        "",
    ]
    for name in names:
        lines.append(f"double {name} = {_float_lit(rng)};")
    lines += ["", "int main(void) {"]
    for _ in range(int(rng.integers(26, 47))):
        lines.append("    " + _statement(rng, names))
    lines.append(f'    printf("%f\\n", {names[0]});')
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------- text structure


def _split(text: str) -> tuple[list[str], list[str], list[str]]:
    """(header+decls, body statements, printf/return/closing) line groups."""
    lines = text.split("\n")
    open_i = lines.index("int main(void) {")
    close_i = next(i for i, ln in enumerate(lines) if ln.startswith("    printf("))
    return lines[: open_i + 1], lines[open_i + 1 : close_i], lines[close_i:]


def _decl_names(header: list[str]) -> list[str]:
    return [m.group(1) for ln in header for m in [re.match(r"double (\w+) =", ln)] if m]


_IDENT_RE = re.compile(r"[A-Za-z_]\w*")
_WRITE_RE = re.compile(r"([A-Za-z_]\w*)\s*(?:[-+*]?=(?!=)|\+\+)")
_RESERVED = set(_KEYWORDS) | _AMBIENT - {"i"}


def _reads_writes(line: str) -> tuple[set[str], set[str]]:
    idents = {m.group(0) for m in _IDENT_RE.finditer(line)} - _RESERVED
    writes = {m.group(1) for m in _WRITE_RE.finditer(line)} - _RESERVED
    return idents - writes, writes


def _independent(s1: str, s2: str) -> bool:
    r1, w1 = _reads_writes(s1)
    r2, w2 = _reads_writes(s2)
    return not (w1 & (r2 | w2)) and not (w2 & (r1 | w1))


def well_formed(sub: Submission) -> list[str]:
    """Issues that would stop the template dialect from compiling; empty
    list means the program is sound (balanced, closed, all names bound)."""
    issues: list[str] = []
    ts = tokenize(sub)
    if ts.unknown_count:
        issues.append(f"{ts.unknown_count} unlexable byte(s)")
    for sf in sub.files:
        text = sf.text()
        for left, right in (("{", "}"), ("(", ")")):
            if text.count(left) != text.count(right):
                issues.append(f"{sf.relative_path}: unbalanced {left}{right}")
        if "int main(void) {" not in text:
            issues.append(f"{sf.relative_path}: missing main")
        if not text.rstrip().endswith("}"):
            issues.append(f"{sf.relative_path}: unterminated body")
        declared = set(_decl_names(text.split("\n")))
        declared |= {m.group(1) for m in re.finditer(r"for \(int (\w+) =", text)}
        stripped = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
        stripped = re.sub(r'"(?:\\.|[^"\\])*"', "", stripped)
        used = set(_IDENT_RE.findall(stripped)) - set(_KEYWORDS) - _AMBIENT
        for name in sorted(used - declared):
            issues.append(f"{sf.relative_path}: undeclared identifier {name}")
    return issues


def _single_file(sub: Submission) -> str:
    if len(sub.files) != 1:
        raise ValueError("synthetic operators expect single-file submissions")
    return sub.files[0].text()


def _make_submission(sub_id: str, text: str) -> Submission:
    return Submission(sub_id, f"synth:{sub_id}", (SourceFile("main.c", text.encode()),))


# ------------------------------------------------------------- operators


def mutate(src: Submission, rate: float = DEFAULT_RATE, seed: int = 0) -> Submission:
    """Plagiarize by local edits: consistent identifier renames, literal
    tweaks, adjacent-statement swaps and spurious statement insertions.

    Every token draws once at `rate`; renames and tweaks fire on the
    matched token, the two structural edits only on a statement's first
    token so edit volume tracks statements rather than raw length.
    """
    if not 0.0 < rate <= 0.3:
        raise ValueError("rate must lie in (0, 0.3]")
    rng = _rng(seed, 9)
    text = _single_file(src)
    ts = tokenize(src)
    raw = text.encode()

    header, stmts, footer = _split(text)
    body_start = sum(len(ln) + 1 for ln in header)
    offsets = []
    pos = body_start
    for ln in stmts:
        offsets.append((pos, pos + len(ln)))
        pos += len(ln) + 1

    names = _decl_names(header)
    renames: dict[str, str] = {}
    edits: list[tuple[int, int, str]] = []
    stmt_ops: dict[int, str] = {}
    seen_stmt_heads: set[int] = set()

    def stmt_of(offset: int) -> int | None:
        for idx, (lo, hi) in enumerate(offsets):
            if lo <= offset < hi:
                return idx
        return None

    for code, (fi, start, end) in zip(ts.tokens, ts.byte_spans):
        if fi != 0:
            continue
        word = raw[start:end].decode()
        fire = rng.random() < rate
        if code == IDENT and word in names:
            if fire and word not in renames:
                fresh = _fresh_names(rng, 1, set(names) | set(renames.values()))[0]
                renames[word] = fresh
        elif code in (INT_LIT, FLOAT_LIT):
            if fire:
                new = _int_lit(rng) if code == INT_LIT else _float_lit(rng)
                edits.append((start, end, new))
        else:
            idx = stmt_of(start)
            if idx is not None and idx not in seen_stmt_heads:
                seen_stmt_heads.add(idx)
                if fire:
                    stmt_ops[idx] = "swap" if rng.random() < 0.5 else "insert"

    for code, (fi, start, end) in zip(ts.tokens, ts.byte_spans):
        if fi == 0 and code == IDENT:
            word = raw[start:end].decode()
            if word in renames:
                edits.append((start, end, renames[word]))

    for start, end, new in sorted(edits, reverse=True):
        text = text[:start] + new + text[end:]

    header, stmts, footer = _split(text)
    names = _decl_names(header)
    for idx in sorted(stmt_ops, reverse=True):
        if stmt_ops[idx] == "insert":
            stmts.insert(idx + 1, "    " + _statement(rng, names))
        elif idx + 1 < len(stmts) and _independent(stmts[idx], stmts[idx + 1]):
            stmts[idx], stmts[idx + 1] = stmts[idx + 1], stmts[idx]

    return _make_submission(f"M{src.id}", "\n".join(header + stmts + footer))


def _map_names(line: str, mapping: dict[str, str]) -> str:
    if not mapping:
        return line
    return _IDENT_RE.sub(lambda m: mapping.get(m.group(0), m.group(0)), line)


def recombine(a: Submission, b: Submission, seed: int = 0, *, points: int = 1) -> Submission:
    """Crossover at statement boundaries: the child keeps a's frame and
    splices in a run of b's statements (names remapped onto a's slots).
    One cut point or two; cuts land away from the extremes so both
    parents contribute substance.
    """
    if a.id == b.id:
        raise ValueError("recombination needs two distinct submissions")
    if points not in (1, 2):
        raise ValueError("points must be 1 or 2")
    rng = _rng(seed, 13)
    ha, sa, fa = _split(_single_file(a))
    hb, sb, _ = _split(_single_file(b))
    names_a = _decl_names(ha)
    names_b = _decl_names(hb)
    mapping = {
        nb: names_a[i % len(names_a)]
        for i, nb in enumerate(names_b)
        if nb != names_a[i % len(names_a)]
    }
    sb = [_map_names(ln, mapping) for ln in sb]

    span = min(len(sa), len(sb))
    tag = "RG" if points == 1 else "RF"
    if points == 1:
        cut = int(rng.integers(max(1, int(span * 0.35)), max(2, int(span * 0.65) + 1)))
        child = sa[:cut] + sb[cut:]
    else:
        c1 = int(rng.integers(max(1, int(span * 0.20)), max(2, int(span * 0.40) + 1)))
        c2 = int(rng.integers(int(span * 0.60), max(int(span * 0.60) + 1, int(span * 0.80) + 1)))
        child = sa[:c1] + sb[c1:c2] + sa[c2:]
    return _make_submission(f"{a.id}{tag}{b.id}", "\n".join(ha + child + fa))


# --------------------------------------------------------------- corpus


def generate_corpus(
    n_orig: int, n_mut: int, n_rec: int, seed: int = DEFAULT_SEED
) -> tuple[list[Submission], GroundTruth]:
    """Standard labeled benchmark: (30, 6, 8) mirrors the published one."""
    if n_orig < 2:
        raise ValueError("need at least 2 originals")
    if n_mut < 0 or n_rec < 0:
        raise ValueError("counts must be nonnegative")

    originals = [
        _make_submission(f"P{i + 1}", _program_text(_rng(seed, 0, i)))
        for i in range(n_orig)
    ]
    subs = list(originals)
    labels: dict[str, Label] = {s.id: Label("original") for s in originals}
    edges: list[tuple[str, str, str]] = []

    taken = {s.id for s in subs}
    for i in range(n_mut):
        x = ((i + 1) * n_orig) // n_mut
        while f"MP{x}" in taken:
            x = x % n_orig + 1
        src = originals[x - 1]
        mut = mutate(src, DEFAULT_RATE, _child_seed(_rng(seed, 1, i)))
        subs.append(mut)
        taken.add(mut.id)
        labels[mut.id] = Label("mutational", (src.id,))
        edges.append((src.id, mut.id, "direct"))

    if n_rec:
        order = _rng(seed, 2).permutation(n_orig * (n_orig - 1))
        picked = 0
        for slot in order:
            if picked == n_rec:
                break
            x, rest = divmod(int(slot), n_orig - 1)
            y = rest if rest < x else rest + 1
            points = 1 if picked % 2 == 0 else 2
            rec = recombine(
                originals[x], originals[y], _child_seed(_rng(seed, 3, picked)), points=points
            )
            if rec.id in taken:
                continue
            subs.append(rec)
            taken.add(rec.id)
            labels[rec.id] = Label("recombination", (originals[x].id, originals[y].id))
            edges.append((originals[x].id, rec.id, "source-of"))
            edges.append((originals[y].id, rec.id, "source-of"))
            picked += 1

    by_source: dict[str, list[str]] = {}
    for sub_id, lab in labels.items():
        for src in lab.sources:
            by_source.setdefault(src, []).append(sub_id)
    for src in sorted(by_source):
        kin = sorted(by_source[src])
        for i in range(len(kin)):
            for j in range(i + 1, len(kin)):
                edges.append((kin[i], kin[j], "indirect"))

    return subs, GroundTruth(labels, tuple(edges))


# ---------------------------------------------------------------- I/O


def write_corpus(subs: list[Submission], gt: GroundTruth, out_dir) -> None:
    import json
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for sub in subs:
        for sf in sub.files:
            dest = out / sub.id / sf.relative_path
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_bytes(sf.data)
    payload = json.dumps(ground_truth_to_obj(gt), indent=2, sort_keys=True) + "\n"
    (out / "ground_truth.json").write_text(payload)


def ground_truth_to_obj(gt: GroundTruth) -> dict:
    return {
        "labels": {
            sub_id: {"kind": lab.kind, "sources": list(lab.sources)}
            for sub_id, lab in gt.labels.items()
        },
        "edges": [list(e) for e in gt.edges],
    }


def ground_truth_from_obj(obj: dict) -> GroundTruth:
    labels = {
        sub_id: Label(body["kind"], tuple(body.get("sources", ())))
        for sub_id, body in obj["labels"].items()
    }
    edges = tuple((a, b, rel) for a, b, rel in obj["edges"])
    return GroundTruth(labels, edges)
