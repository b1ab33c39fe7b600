"""Binary field snapshots (CSGF format).

Layout, all little-endian:

    magic   "CSGF"          4 bytes
    version u32 = 1
    n1      u32
    n2      u32
    length  f64
    rep     u8              0 = physical, 1 = spectral
    k       u8              component count
    data    k * n1 * n2 * (f64 re, f64 im), row-major per component

Write -> read round-trips are bit-exact.
"""

from __future__ import annotations

import struct
from typing import Sequence

import numpy as np

from .grid import Grid2D, PHYSICAL, SPECTRAL

MAGIC = b"CSGF"
VERSION = 1
_HEADER = struct.Struct("<4sIII d BB")
_REP_CODE = {PHYSICAL: 0, SPECTRAL: 1}
_REP_NAME = {0: PHYSICAL, 1: SPECTRAL}


class SnapshotFormatError(ValueError):
    pass


def write_snapshot(path, grid: Grid2D, components: Sequence[np.ndarray],
                   representation: str) -> None:
    """Write complex component arrays (each n1 x n2) to a CSGF file."""
    comps = [np.ascontiguousarray(np.asarray(c, dtype=np.complex128)) for c in components]
    if not comps or len(comps) > 255:
        raise SnapshotFormatError(f"component count must be in 1..255, got {len(comps)}")
    for c in comps:
        if c.shape != grid.shape:
            raise SnapshotFormatError(f"component shape {c.shape} != grid {grid.shape}")
    header = _HEADER.pack(MAGIC, VERSION, grid.n1, grid.n2, grid.length,
                          _REP_CODE[representation], len(comps))
    with open(path, "wb") as fh:
        fh.write(header)
        for c in comps:
            interleaved = np.empty(c.shape + (2,), dtype="<f8")
            interleaved[..., 0] = c.real
            interleaved[..., 1] = c.imag
            fh.write(interleaved.tobytes())


def read_snapshot(path) -> tuple[Grid2D, list[np.ndarray], str]:
    """Read a CSGF file; returns (grid, component arrays, representation)."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise SnapshotFormatError("truncated header")
        magic, version, n1, n2, length, rep_code, k = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise SnapshotFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise SnapshotFormatError(f"unsupported version {version}")
        if rep_code not in _REP_NAME:
            raise SnapshotFormatError(f"unknown representation code {rep_code}")
        grid = Grid2D(n1, n2, length)
        count = n1 * n2 * 2
        comps = []
        for _ in range(k):
            buf = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
            if buf.size < count:
                raise SnapshotFormatError("truncated payload")
            pair = buf.reshape(n1, n2, 2)
            comps.append((pair[..., 0] + 1j * pair[..., 1]).astype(np.complex128))
    return grid, comps, _REP_NAME[rep_code]
