"""Compressed-length oracle C(x) behind the compression distance.

Two deterministic backends:

* ``deflate`` -- zlib's raw deflate stream (negative window bits), which
  omits all container framing, so C(x) is the entropy-coded payload alone.
* ``block_sort`` -- bz2.  Its container framing cannot be omitted; the
  overhead is a per-call constant, so distances computed from differences
  of C values carry only a mild, uniform bias.

deflate's dictionary window is about 32 KiB: past that, repeated content
between the two halves of a concatenation is out of reach and the distance
drifts toward 1 even for near-duplicates.  Callers compressing payloads
near or above the window should surface `window_warning` to the user.
"""
from __future__ import annotations

import bz2
import zlib
from dataclasses import dataclass

__all__ = ["BACKENDS", "CompressorId", "compressed_len", "window_warning"]

BACKENDS = ("deflate", "block_sort")

_DEFLATE_WINDOW = 32 * 1024


@dataclass(frozen=True)
class CompressorId:
    name: str = "deflate"
    level: int = 9

    def __post_init__(self):
        if self.name not in BACKENDS:
            raise ValueError(f"unknown compressor backend {self.name!r}")
        if not 1 <= self.level <= 9:
            raise ValueError(f"compressor level out of range 1-9: {self.level}")

    def label(self) -> str:
        return f"{self.name}-{self.level}"


def compressed_len(c: CompressorId, data: bytes) -> int:
    """Length in bytes of `data` compressed by the chosen backend."""
    if c.name == "deflate":
        obj = zlib.compressobj(c.level, zlib.DEFLATED, -15)
        return len(obj.compress(data)) + len(obj.flush())
    return len(bz2.compress(data, c.level))


def window_warning(c: CompressorId, payload_bytes: int, label: str) -> str | None:
    """Warn when a deflate payload outgrows the dictionary window."""
    if c.name == "deflate" and payload_bytes > _DEFLATE_WINDOW:
        return (
            f"{label}: payload of {payload_bytes} bytes exceeds the ~32 KiB "
            f"deflate window; consider the block_sort backend"
        )
    return None
