"""Deterministic RNG streams derived from a single user-facing seed.

All randomness in the package flows through PCG64 generators created here.
Streams are derived with numpy's SeedSequence (entropy = seed, spawn_key =
stream key), so independent components -- solver restarts, rounding trials,
instance generators -- draw from non-overlapping streams while staying fully
reproducible for a fixed seed. String key parts are hashed with CRC32, which
is stable across platforms and Python versions.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key_part(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    if isinstance(part, str):
        return zlib.crc32(part.encode("ascii"))
    raise TypeError(f"unsupported stream key part: {part!r}")


def stream(seed: int, *key) -> np.random.Generator:
    """Return the PCG64 generator for the (seed, *key) stream."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & (2**63 - 1),
        spawn_key=tuple(_key_part(p) for p in key),
    )
    return np.random.Generator(np.random.PCG64(ss))
