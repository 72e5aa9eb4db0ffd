"""ACPH: little-endian binary container for a curvature histogram.

Layout: b"ACPH", uint32 version (1), four int64 root curvatures, uint64 lo,
uint64 hi, then hi - lo uint32 counts.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import Quadruple
from .enumerate import CurvatureHistogram
from .errors import UsageError

MAGIC = b"ACPH"
VERSION = 1
_HEADER = struct.Struct("<4sI4qQQ")


def to_bytes(hist: CurvatureHistogram) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, *hist.root, hist.lo, hist.hi)
    return header + np.asarray(hist.counts, dtype="<u4").tobytes()


def from_bytes(data: bytes) -> CurvatureHistogram:
    if len(data) < _HEADER.size:
        raise UsageError("truncated ACPH header")
    magic, version, r1, r2, r3, r4, lo, hi = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise UsageError("not an ACPH file (bad magic)")
    if version != VERSION:
        raise UsageError(f"unsupported ACPH version {version}")
    if hi < lo or len(data) != _HEADER.size + 4 * (hi - lo):
        raise UsageError("ACPH payload length does not match its header")
    counts = np.frombuffer(data, dtype="<u4", offset=_HEADER.size).astype(np.uint32)
    return CurvatureHistogram(int(lo), int(hi), counts, Quadruple(r1, r2, r3, r4))


def write(path, hist: CurvatureHistogram) -> None:
    Path(path).write_bytes(to_bytes(hist))


def read(path) -> CurvatureHistogram:
    return from_bytes(Path(path).read_bytes())
