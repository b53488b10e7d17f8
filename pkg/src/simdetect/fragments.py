"""Duplicate-fragment evidence between one pair of submissions.

Greedy string tiling over token streams: repeatedly take the longest common
substring of the two streams whose positions are not yet covered by an
earlier tile, mark it, and stop once the longest remaining match falls below
`min_match_length`.  Ties go to the smallest start index in the first
stream, then the smallest in the second.  Tiles therefore come out in
nonincreasing length order and never overlap on either side.

Matches shorter than `min_match_length` are noise, not evidence: every
nontrivial program shares idioms like `for (int i = 0;`.  The default floor
is 8 tokens for lexed streams and 16 for raw byte streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lexer import TokenStream

__all__ = [
    "MIN_MATCH_C_LIKE",
    "MIN_MATCH_RAW",
    "Tile",
    "FragmentSet",
    "find_tiles",
    "top_n",
    "tile_occurrences",
    "fragments_to_obj",
]

MIN_MATCH_C_LIKE = 8
MIN_MATCH_RAW = 16

ByteSegment = tuple[int, int, int]  # (file index, start byte, end byte)


@dataclass(frozen=True)
class Tile:
    a_span: tuple[int, int]  # (token start, length) in stream a
    b_span: tuple[int, int]
    length: int
    a_bytes: tuple[ByteSegment, ...]
    b_bytes: tuple[ByteSegment, ...]


@dataclass
class FragmentSet:
    pair: tuple[str, str]
    tiles: list[Tile]
    coverage: float  # fraction of the shorter stream covered by tiles
    shorter_len: int = 0


def _byte_segments(spans: list[tuple[int, int, int]], start: int, length: int) -> tuple[ByteSegment, ...]:
    """Collapse a token window into per-file byte ranges (gaps included)."""
    segs: list[list[int]] = []
    for fi, s, e in spans[start : start + length]:
        if segs and segs[-1][0] == fi:
            segs[-1][2] = max(segs[-1][2], e)
        else:
            segs.append([fi, s, e])
    return tuple((fi, s, e) for fi, s, e in segs)


def _coverage(tiles: list[Tile], len_a: int, len_b: int) -> float:
    shorter = min(len_a, len_b)
    if shorter == 0:
        return 0.0
    return sum(t.length for t in tiles) / shorter


def find_tiles(a: TokenStream, b: TokenStream, min_match_length: int = MIN_MATCH_C_LIKE) -> FragmentSet:
    """Greedy string tiling of the two streams."""
    if min_match_length < 3:
        raise ValueError(f"min_match_length must be >= 3, got {min_match_length}")
    ta = np.asarray(a.tokens, dtype=np.int32)
    tb = np.asarray(b.tokens, dtype=np.int32)
    la, lb = len(ta), len(tb)
    free_a = np.ones(la, dtype=bool)
    free_b = np.ones(lb, dtype=bool)
    tiles: list[Tile] = []

    zeros = np.zeros(lb, dtype=np.int32)
    while la and lb:
        # L[i][j] = length of the common run starting at (i, j) over unmarked
        # positions: eq ? L[i+1][j+1] + 1 : 0, built one row at a time.  The
        # descending i loop (updating on ties) keeps the smallest a index and
        # argmax keeps the smallest b index.
        below = np.zeros(lb + 1, dtype=np.int32)
        best_len = 0
        best_a = best_b = -1
        for i in range(la - 1, -1, -1):
            if free_a[i]:
                eq = (tb == ta[i]) & free_b
                row = np.where(eq, below[1 : lb + 1] + 1, zeros)
            else:
                row = zeros
            rm = int(row.max())
            if rm > 0 and rm >= best_len:
                best_len = rm
                best_a = i
                best_b = int(np.argmax(row))
            below[:lb] = row
        if best_len < min_match_length:
            break
        free_a[best_a : best_a + best_len] = False
        free_b[best_b : best_b + best_len] = False
        tiles.append(
            Tile(
                a_span=(best_a, best_len),
                b_span=(best_b, best_len),
                length=best_len,
                a_bytes=_byte_segments(a.byte_spans, best_a, best_len),
                b_bytes=_byte_segments(b.byte_spans, best_b, best_len),
            )
        )
    return FragmentSet(
        (a.submission_id, b.submission_id), tiles, _coverage(tiles, la, lb), min(la, lb)
    )


def top_n(fs: FragmentSet, n: int) -> FragmentSet:
    """Keep the n longest tiles (the discovery order is already by length)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    kept = fs.tiles[:n]
    cov = sum(t.length for t in kept) / fs.shorter_len if fs.shorter_len else 0.0
    return FragmentSet(fs.pair, kept, cov, fs.shorter_len)


def tile_occurrences(tile: Tile, a: TokenStream, b: TokenStream) -> dict[str, list[int]]:
    """All start indices where the tile's token content occurs in each stream."""
    content = a.tokens[tile.a_span[0] : tile.a_span[0] + tile.length]
    out = {}
    for key, stream in (("a", a.tokens), ("b", b.tokens)):
        hits = []
        limit = len(stream) - len(content)
        for start in range(limit + 1):
            if stream[start : start + len(content)] == content:
                hits.append(start)
        out[key] = hits
    return out


def fragments_to_obj(fs: FragmentSet) -> dict:
    return {
        "pair": list(fs.pair),
        "coverage": fs.coverage,
        "tiles": [
            {
                "a_span": list(t.a_span),
                "b_span": list(t.b_span),
                "length": t.length,
                "a_bytes": [list(seg) for seg in t.a_bytes],
                "b_bytes": [list(seg) for seg in t.b_bytes],
            }
            for t in fs.tiles
        ],
    }
