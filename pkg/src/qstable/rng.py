"""Seeded, splittable random streams.

Everything stochastic in this package draws from Philox4x64, a
counter-based generator.  A (seed, stream_id) pair keys an independent
stream and substreams are carved out of the 256-bit counter space, so
replicate r of an experiment produces the same bits no matter how the
replicates are scheduled across workers or in what order they run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream"]

_U64_MAX = 2**64


@dataclass(frozen=True)
class RngStream:
    """Key identifying one reproducible random stream."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= value < _U64_MAX:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def generator(self, substream: int = 0) -> np.random.Generator:
        """numpy Generator positioned at the start of ``substream``.

        Substreams sit 2**128 counter blocks apart, far beyond what any
        single stream can consume, so they never overlap.  They are used
        to key independent objects within one stream (e.g. the rows of a
        measurement design).
        """
        if not 0 <= substream < _U64_MAX:
            raise ValueError(f"substream must be an unsigned 64-bit integer, got {substream!r}")
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        counter = np.array([0, 0, substream, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=counter, key=key))

    def child(self, stream_id: int) -> "RngStream":
        """Same seed, different stream."""
        return RngStream(self.seed, stream_id)
