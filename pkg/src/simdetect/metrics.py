"""Pairwise distance matrices over a corpus.

Three algorithms produce normalized distances in [0,1] (0 = identical):

* ``ncd_raw``    -- compression distance over raw byte streams.
* ``ncd_tokens`` -- compression distance over serialized c_like token
                    streams, so renaming/reformatting cannot hide copying.
* ``token_count`` -- one minus the cosine of the token-frequency vectors;
                    position-independent by construction.

Compression distance for payloads a, b:

    D = (C(ab) - min(C(a), C(b))) / max(C(a), C(b))

clamped to [0,1], where C is the compressed length and ab the concatenation
in canonical order (lexicographically smaller submission id first).  The
matrix builder computes each unordered pair once and mirrors it, so symmetry
is exact by construction, and byte-identical payloads short-circuit to an
exact 0 (the raw formula yields a small positive value even for a == b).

The variance subtest refines an existing matrix: a cell significantly below
the rest of its row (or of its column's row) is shrunk further, concentrating
evidence of pairwise copying.  The shrink is proportional: a cell whose
robust row score s = (M - v)/S exceeds the critical value g becomes v * g/s.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .compress import CompressorId, compressed_len
from .corpus import Submission
from .lexer import FILE_BREAK, TokenStream, serialize, tokenize

__all__ = [
    "ALGORITHMS",
    "MetricError",
    "DistanceMatrix",
    "TokenVector",
    "ncd_pair",
    "token_distance",
    "token_vector",
    "variance_subtest",
    "build_matrix",
    "matrix_to_obj",
    "matrix_from_obj",
]

ALGORITHMS = ("ncd_raw", "ncd_tokens", "token_count")


class MetricError(Exception):
    pass


@dataclass
class DistanceMatrix:
    test_name: str
    ids: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.ids = list(self.ids)
        self.values = np.asarray(self.values, dtype=np.float64)
        n = len(self.ids)
        if sorted(set(self.ids)) != self.ids:
            raise MetricError(f"{self.test_name}: ids must be sorted and unique")
        if self.values.shape != (n, n):
            raise MetricError(f"{self.test_name}: expected {n}x{n} values")
        if not np.array_equal(self.values, self.values.T):
            raise MetricError(f"{self.test_name}: matrix not symmetric")
        if np.any(np.diagonal(self.values) != 0.0):
            raise MetricError(f"{self.test_name}: nonzero diagonal")
        if np.any(self.values < 0.0) or np.any(self.values > 1.0):
            raise MetricError(f"{self.test_name}: values outside [0,1]")

    @property
    def n(self) -> int:
        return len(self.ids)

    def index(self, sub_id: str) -> int:
        try:
            return self.ids.index(sub_id)
        except ValueError:
            raise MetricError(f"unknown submission id {sub_id!r}") from None

    def pair_value(self, a: str, b: str) -> float:
        return float(self.values[self.index(a), self.index(b)])

    def triu_values(self) -> np.ndarray:
        """Upper-triangle distances, row-major; the pairwise ensemble."""
        return self.values[np.triu_indices(self.n, 1)]

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return (
            self.test_name == other.test_name
            and self.ids == other.ids
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class TokenVector:
    submission_id: str
    counts: dict[int, int] = field(hash=False)

    def __post_init__(self):
        if not self.counts or all(v == 0 for v in self.counts.values()):
            raise MetricError(f"{self.submission_id}: empty token vector")
        if any(v < 0 for v in self.counts.values()):
            raise MetricError(f"{self.submission_id}: negative token count")


def token_vector(ts: TokenStream) -> TokenVector:
    """Frequency vector over token kinds.  FILE_BREAK markers are not a
    language token and are excluded, so splitting code across files does not
    move the vector."""
    counts: dict[int, int] = {}
    for tok in ts.tokens:
        if tok != FILE_BREAK:
            counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        raise MetricError(f"{ts.submission_id}: no tokens to count")
    return TokenVector(ts.submission_id, counts)


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def ncd_pair(
    a: bytes,
    b: bytes,
    c: CompressorId,
    *,
    ca: int | None = None,
    cb: int | None = None,
) -> float:
    """Compression distance for one ordered pair of payloads.

    `ca`/`cb` let the matrix builder reuse per-submission compressed lengths.
    """
    if not a or not b:
        raise MetricError("compression distance needs non-empty payloads")
    if a == b:
        return 0.0
    if ca is None:
        ca = compressed_len(c, a)
    if cb is None:
        cb = compressed_len(c, b)
    cab = compressed_len(c, a + b)
    lo, hi = (ca, cb) if ca <= cb else (cb, ca)
    if hi == 0:
        return 0.0
    return _clamp01((cab - lo) / hi)


def token_distance(va: TokenVector, vb: TokenVector) -> float:
    """1 - cosine(va, vb), clamped to [0,1].

    The dot product and squared norms are exact integers, so identical (or
    proportional) vectors give an exact 0 and disjoint supports an exact 1.
    """
    dot = sum(cnt * vb.counts.get(kind, 0) for kind, cnt in va.counts.items())
    sa = sum(v * v for v in va.counts.values())
    sb = sum(v * v for v in vb.counts.values())
    if sa == 0 or sb == 0:
        raise MetricError("zero-norm token vector")
    if dot * dot == sa * sb:
        return 0.0
    return _clamp01(1.0 - dot / math.sqrt(sa * sb))


def variance_subtest(m: DistanceMatrix, alpha_row: float = 0.05) -> DistanceMatrix:
    """Shrink cells that sit significantly below their row's bulk.

    For each off-diagonal cell (i,j) with row scores s_i = (M_i - v)/S_i and
    s_j (median and MAD over each row's off-diagonal entries), let
    s = max(s_i, s_j).  If s exceeds g = critical(n-1, alpha_row) the cell
    becomes v * g/s, otherwise it is left bitwise untouched.  A row with
    zero MAD contributes an infinite score below its median (its cells shrink
    to 0) and zero otherwise.
    """
    from .outliers import HampelParams, hampel_critical

    n = m.n
    if n < 4:
        raise MetricError("variance subtest needs at least 4 submissions")
    g = hampel_critical(n - 1, HampelParams(alpha=alpha_row))

    v = m.values
    off = ~np.eye(n, dtype=bool)
    scores = np.empty((n, n))
    for i in range(n):
        row = v[i][off[i]]
        med = float(np.median(row))
        mad = float(np.median(np.abs(row - med)))
        if mad > 0.0:
            scores[i] = (med - v[i]) / mad
        else:
            scores[i] = np.where(v[i] < med, np.inf, 0.0)
    scores = np.maximum(scores, scores.T)

    mask = (scores > g) & off
    with np.errstate(divide="ignore", invalid="ignore"):
        shrunk = np.where(np.isinf(scores), 0.0, v * (g / scores))
    out = np.where(mask, shrunk, v)
    np.fill_diagonal(out, 0.0)
    return DistanceMatrix(m.test_name, list(m.ids), out)


def build_matrix(
    subs: list[Submission],
    algorithm: str,
    *,
    compressor: CompressorId = CompressorId(),
    workers: int = 1,
) -> DistanceMatrix:
    """All-pairs distance matrix; identical for every worker count."""
    if algorithm not in ALGORITHMS:
        raise MetricError(f"unknown algorithm {algorithm!r}")
    if len(subs) < 2:
        raise MetricError("need at least 2 submissions")
    ids = [s.id for s in subs]
    if sorted(set(ids)) != ids:
        raise MetricError("submissions must be sorted by unique id")

    n = len(subs)
    if algorithm == "token_count":
        vectors = []
        for sub in subs:
            try:
                vectors.append(token_vector(tokenize(sub, "c_like")))
            except MetricError as exc:
                raise MetricError(f"submission {sub.id!r}: {exc}") from exc

        def cell(i: int, j: int) -> float:
            return token_distance(vectors[i], vectors[j])

    else:
        lang = "raw" if algorithm == "ncd_raw" else "c_like"
        payloads = [serialize(tokenize(sub, lang)) for sub in subs]
        for sub, payload in zip(subs, payloads):
            if not payload:
                raise MetricError(f"submission {sub.id!r}: empty payload for {algorithm}")
        lengths = [compressed_len(compressor, p) for p in payloads]

        def cell(i: int, j: int) -> float:
            return ncd_pair(
                payloads[i], payloads[j], compressor, ca=lengths[i], cb=lengths[j]
            )

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def compute(idx: tuple[int, int]) -> float:
        i, j = idx
        try:
            return cell(i, j)
        except MetricError:
            raise
        except Exception as exc:
            raise MetricError(f"pair ({ids[i]}, {ids[j]}): {exc}") from exc

    values = np.zeros((n, n))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(compute, pairs))
    else:
        results = [compute(p) for p in pairs]
    for (i, j), d in zip(pairs, results):
        values[i, j] = d
        values[j, i] = d
    return DistanceMatrix(algorithm, ids, values)


def matrix_to_obj(m: DistanceMatrix) -> dict:
    """Report encoding: upper triangle only, row-major."""
    return {
        "test": m.test_name,
        "ids": list(m.ids),
        "triu": [float(x) for x in m.triu_values()],
    }


def matrix_from_obj(obj: dict) -> DistanceMatrix:
    try:
        test = obj["test"]
        ids = list(obj["ids"])
        triu = obj["triu"]
    except (KeyError, TypeError) as exc:
        raise MetricError(f"malformed matrix object: {exc}") from exc
    n = len(ids)
    expect = n * (n - 1) // 2
    if len(triu) != expect:
        raise MetricError(
            f"{test}: incomplete matrix, expected {expect} distances, got {len(triu)}"
        )
    values = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    values[iu] = triu
    values[(iu[1], iu[0])] = triu
    return DistanceMatrix(test, ids, values)
