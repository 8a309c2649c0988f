"""Threshold quantization of powered stable samples, and the packed code format.

An m-threshold scheme 0 < C_1 < ... < C_m cuts the powered magnitude
z = |y|^alpha into m+1 bins: bin 0 is z <= C_1, bin k is C_k < z <= C_{k+1},
bin m is z > C_m.  Only the bin index of each sample survives
quantization; the estimators downstream consume either the per-sample
codes (CodeStream) or their histogram (BinCounts).

CodeStream byte format (version 1, all integers little-endian):

    magic   4 bytes  b"SQSK"
    version u8       1
    m       u8       number of thresholds, 1..7
    count   u64      number of samples
    payload          ceil(count * b / 8) bytes, b = ceil(log2(m+1))

Sample j occupies payload bits [j*b, (j+1)*b), least significant bit
first within each byte; pad bits in the final byte are zero.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .dist import is_zero_plus, validate_alpha

__all__ = [
    "ThresholdScheme",
    "BinCounts",
    "CodeStream",
    "encode",
    "power_encode",
    "decode_counts",
]

_MAGIC = b"SQSK"
_VERSION = 1
_MAX_M = 7


@dataclass(frozen=True)
class ThresholdScheme:
    """Quantizer: an alpha tag plus strictly increasing positive thresholds."""

    alpha: object
    thresholds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", validate_alpha(self.alpha))
        c = np.asarray(self.thresholds, dtype=float)
        if c.ndim != 1 or not 1 <= c.size <= _MAX_M:
            raise ValueError(f"need between 1 and {_MAX_M} thresholds, got shape {c.shape}")
        if not np.all(np.isfinite(c)) or not np.all(c > 0.0):
            raise ValueError("thresholds must be positive and finite")
        if np.any(np.diff(c) <= 0.0):
            raise ValueError("thresholds must be strictly increasing")
        c.setflags(write=False)
        object.__setattr__(self, "thresholds", c)

    @property
    def m(self) -> int:
        return self.thresholds.size

    def etas_for(self, lam: float) -> np.ndarray:
        """Normalized thresholds eta_k = Lambda / C_k (decreasing in k)."""
        if not lam > 0.0:
            raise ValueError("Lambda must be positive")
        return lam / self.thresholds


@dataclass(frozen=True)
class BinCounts:
    """Histogram over the m+1 quantizer bins."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("counts must be a vector with at least two bins")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(c == np.floor(c)):
                raise ValueError("counts must be integers")
        c = c.astype(np.int64)
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def m(self) -> int:
        return self.counts.size - 1

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class CodeStream:
    """Packed per-sample bin indices."""

    m: int
    sample_count: int
    payload: bytes = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.m <= _MAX_M:
            raise ValueError(f"m must be in 1..{_MAX_M}")
        if self.sample_count < 0:
            raise ValueError("sample_count must be nonnegative")
        expected = _payload_size(self.sample_count, self.bits_per_sample)
        if len(self.payload) != expected:
            raise ValueError(
                f"payload has {len(self.payload)} bytes, expected {expected}"
            )

    @property
    def bits_per_sample(self) -> int:
        return max(1, math.ceil(math.log2(self.m + 1)))

    def to_bytes(self) -> bytes:
        head = _MAGIC + struct.pack("<BBQ", _VERSION, self.m, self.sample_count)
        return head + self.payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CodeStream":
        if len(blob) < 14 or blob[:4] != _MAGIC:
            raise ValueError("not a code stream: bad magic or truncated header")
        version, m, count = struct.unpack("<BBQ", blob[4:14])
        if version != _VERSION:
            raise ValueError(f"unsupported code stream version {version}")
        if not 1 <= m <= _MAX_M:
            raise ValueError(f"corrupt header: m={m}")
        bits = max(1, math.ceil(math.log2(m + 1)))
        expected = 14 + _payload_size(count, bits)
        if len(blob) != expected:
            raise ValueError(f"code stream has {len(blob)} bytes, expected {expected}")
        return cls(m=m, sample_count=count, payload=blob[14:])


def _payload_size(count: int, bits: int) -> int:
    return (count * bits + 7) // 8


def _bin_indices(powered: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    # side='left' puts z == C_k into bin k (bins are left-open, right-closed)
    return np.searchsorted(thresholds, powered, side="left")


def _pack(indices: np.ndarray, bits: int) -> bytes:
    shifts = np.arange(bits, dtype=np.uint8)
    bitmat = (indices[:, None].astype(np.uint8) >> shifts) & 1
    return np.packbits(bitmat.ravel(), bitorder="little").tobytes()


def _unpack(payload: bytes, count: int, bits: int) -> np.ndarray:
    raw = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    used = count * bits
    if np.any(raw[used:]):
        raise ValueError("corrupt code stream: nonzero pad bits")
    bitmat = raw[:used].reshape(count, bits)
    return (bitmat << np.arange(bits, dtype=np.uint8)).sum(axis=1).astype(np.int64)


def power_encode(powered, scheme: ThresholdScheme):
    """Quantize already-powered magnitudes z = |y|^alpha."""
    z = np.asarray(powered, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("need a nonempty vector of powered samples")
    if not np.all(np.isfinite(z)) or np.any(z < 0.0):
        raise ValueError("powered samples must be finite and nonnegative")
    idx = _bin_indices(z, scheme.thresholds)
    counts = BinCounts(np.bincount(idx, minlength=scheme.m + 1))
    bits = max(1, math.ceil(math.log2(scheme.m + 1)))
    code = CodeStream(m=scheme.m, sample_count=z.size, payload=_pack(idx, bits))
    return counts, code


def encode(samples, scheme: ThresholdScheme):
    """Quantize raw samples y by their powered magnitude |y|^alpha.

    The powering exponent is the scheme's alpha, so a ZeroPlus scheme is
    rejected here; data born in the powered scale goes through
    power_encode instead.
    """
    if is_zero_plus(scheme.alpha):
        raise ValueError("cannot power raw samples at ZeroPlus; use power_encode")
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("need a nonempty vector of samples")
    if not np.all(np.isfinite(y)):
        raise ValueError("samples must be finite")
    return power_encode(np.abs(y) ** scheme.alpha, scheme)


def decode_counts(code: CodeStream, m: int) -> BinCounts:
    """Recover the bin histogram from a packed code stream."""
    if m != code.m:
        raise ValueError(f"stream was written with m={code.m}, asked to decode m={m}")
    if code.sample_count == 0:
        raise ValueError("empty code stream")
    idx = _unpack(code.payload, code.sample_count, code.bits_per_sample)
    if np.any(idx > code.m):
        raise ValueError("corrupt code stream: bin index out of range")
    return BinCounts(np.bincount(idx, minlength=code.m + 1))
