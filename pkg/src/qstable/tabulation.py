"""Precomputed multibit MLE tables over occupancy fractions.

For a 2-bit scheme the likelihood depends on the data only through the
four bin fractions, so the solver output can be tabulated once on the
lattice (i, j, k) with i + j + k <= T, where index k stands for the
fraction k/T exactly.  A lookup then costs an index computation instead
of a root solve.  Entries store Lambda_hat / C1, making the table a
function of the threshold ratios alone; the caller's C1 scales the
result back.

Lookups default to barycentric interpolation over the Kuhn simplex of
the surrounding lattice cell: plain nearest-point rounding keeps the
full O(1/T) quantization error, which at T = 100 is visible against the
exact solver once n reaches 10^4, while interpolation is exact for
affine functions and removes that flatlining for the same table size.
Counts landing exactly on a lattice point skip interpolation and return
the stored entry unchanged in either mode.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coding import BinCounts, ThresholdScheme
from .dist import ZeroPlus, is_zero_plus, validate_alpha
from .errors import EstimationError
from .estimators import SMOOTHING, solve_multibit_batch

__all__ = ["MleTable", "build_table", "lookup", "lookup_batch", "save_table", "load_table"]

_MAGIC = b"SQTB"
_VERSION = 1
_HEADER = struct.Struct("<4sBBdBH")
_BUILD_CHUNK = 1 << 18


def _simplex_size(T: int) -> int:
    # number of (i, j, k) with nonnegative components summing to <= T
    return (T + 1) * (T + 2) * (T + 3) // 6


def _flat_index(T: int, i, j, k):
    """Lexicographic position of lattice point (i, j, k) in the simplex."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    if np.any(i < 0) or np.any(j < 0) or np.any(k < 0) or np.any(i + j + k > T):
        raise ValueError("index outside the feasible simplex (inconsistent counts)")
    r = T - i
    off_i = _simplex_size(T) - (r + 1) * (r + 2) * (r + 3) // 6
    off_j = j * (r + 1) - j * (j - 1) // 2
    return off_i + off_j + k


def _lattice_points(T: int) -> np.ndarray:
    """All (i, j, k) with i + j + k <= T, in _flat_index order."""
    out = np.empty((_simplex_size(T), 3), dtype=np.int64)
    pos = 0
    for i in range(T + 1):
        for j in range(T - i + 1):
            span = T - i - j + 1
            out[pos : pos + span, 0] = i
            out[pos : pos + span, 1] = j
            out[pos : pos + span, 2] = np.arange(span)
            pos += span
    return out


def _smooth_rows(counts: np.ndarray) -> np.ndarray:
    # vectorized mirror of estimators._smooth_bins over (R, 4) count rows
    c = counts.astype(float)
    n = c.sum(axis=1)
    all_lo = c[:, 0] == n
    all_hi = c[:, -1] == n
    c[all_lo, 0] -= SMOOTHING
    c[all_lo, -1] += SMOOTHING
    c[all_hi, -1] -= SMOOTHING
    c[all_hi, 0] += SMOOTHING
    interior = ~(all_lo | all_hi)
    lo_empty = interior & (c[:, 0] == 0.0)
    hi_empty = interior & (c[:, -1] == 0.0)
    c[lo_empty, 0] = SMOOTHING
    c[hi_empty, -1] = SMOOTHING
    return c


@dataclass(frozen=True)
class MleTable:
    """Dense simplex table of normalized 2-bit MLE solutions.

    entries[_flat_index(T, i, j, k)] holds Lambda_hat / C1 for the count
    fractions (i/T, j/T, k/T, 1 - (i+j+k)/T); cells the solver could not
    place inside its search range hold NaN.  Instances are immutable and
    safe to share across threads.
    """

    alpha: object
    threshold_ratios: tuple
    T: int
    entries: np.ndarray

    def __post_init__(self):
        validate_alpha(self.alpha)
        ratios = tuple(float(r) for r in self.threshold_ratios)
        if len(ratios) != 2 or ratios[0] <= 1.0 or ratios[1] <= ratios[0]:
            raise ValueError("threshold_ratios must be increasing and exceed 1")
        object.__setattr__(self, "threshold_ratios", ratios)
        if not 2 <= self.T <= 0xFFFF:
            raise ValueError("T must lie in [2, 65535]")
        e = np.ascontiguousarray(self.entries, dtype=np.float64)
        if e.shape != (_simplex_size(self.T),):
            raise ValueError("entries length does not match the T simplex")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def cell_value(self, i: int, j: int, k: int) -> float:
        return float(self.entries[_flat_index(self.T, i, j, k)])


def build_table(alpha, scheme: ThresholdScheme, T: int) -> MleTable:
    """Solve the 2-bit likelihood on every lattice cell of resolution T.

    The solve runs on thresholds normalized by C1, so two schemes with
    equal ratios produce bit-identical tables regardless of scale.
    """
    a = validate_alpha(alpha)
    if scheme.m != 3:
        raise ValueError("tables are defined for 2-bit schemes (m = 3)")
    if not is_zero_plus(a) and not is_zero_plus(scheme.alpha) and a != scheme.alpha:
        raise ValueError("alpha disagrees with the scheme's alpha")
    if T < 2:
        raise ValueError("T must be at least 2")
    ratios = scheme.thresholds / scheme.thresholds[0]
    pts = _lattice_points(T)
    counts = np.column_stack([pts, T - pts.sum(axis=1)])
    fracs = _smooth_rows(counts)
    entries = np.empty(len(fracs), dtype=np.float64)
    for lo in range(0, len(fracs), _BUILD_CHUNK):
        hi = min(lo + _BUILD_CHUNK, len(fracs))
        entries[lo:hi] = solve_multibit_batch(fracs[lo:hi], ratios, a)
    return MleTable(
        alpha=a,
        threshold_ratios=(float(ratios[1]), float(ratios[2])),
        T=T,
        entries=entries,
    )


def _nearest_index(T: int, x: np.ndarray) -> np.ndarray:
    idx = np.rint(x).astype(np.int64)
    # independent rounding can overshoot the simplex by one; undo the
    # round-up that gained the most, deterministically
    while idx.sum() > T:
        gain = np.where(idx > 0, idx - x, -np.inf)
        j = int(np.argmax(gain))
        idx[j] -= 1
    return idx


def _kuhn_cell(x: np.ndarray):
    base = np.floor(x).astype(np.int64)
    frac = x - base
    order = np.argsort(-frac, kind="stable")
    corners = np.tile(base, (4, 1))
    for t, axis in enumerate(order):
        corners[t + 1 :, axis] += 1
    phi = frac[order]
    weights = np.array([1.0 - phi[0], phi[0] - phi[1], phi[1] - phi[2], phi[2]])
    return corners, weights


def lookup(table: MleTable, counts: BinCounts, C1: float, mode: str = "interp") -> float:
    """Table estimate C1 * entry for the occupancy fractions of counts.

    mode "interp" blends the vertices of the enclosing lattice simplex;
    "nearest" snaps to the closest lattice point.  Exact lattice hits
    return the stored entry in both modes.
    """
    if counts.m != 3:
        raise ValueError("lookup needs 2-bit counts (four bins)")
    if not C1 > 0.0 or not math.isfinite(C1):
        raise ValueError("C1 must be positive and finite")
    if mode not in ("interp", "nearest"):
        raise ValueError(f"unknown lookup mode {mode!r}")
    n = counts.n
    if n < 1:
        raise ValueError("counts are empty")
    T = table.T
    scaled = [int(c) * T for c in counts.counts[:3]]
    if all(s % n == 0 for s in scaled):
        value = table.entries[_flat_index(T, *(s // n for s in scaled))]
        if not np.isfinite(value):
            raise EstimationError("table cell holds the unsolvable sentinel")
        return C1 * float(value)
    # delegate the cell arithmetic to the batch path so the two entry
    # points stay bit-identical
    value = lookup_batch(table, np.asarray(counts.counts)[None, :], C1, mode=mode)[0]
    if not np.isfinite(value):
        if mode == "nearest":
            raise EstimationError("table cell holds the unsolvable sentinel")
        raise EstimationError("no usable lattice vertex around the requested point")
    return float(value)


def lookup_batch(table: MleTable, counts: np.ndarray, C1: float, mode: str = "interp") -> np.ndarray:
    """Vectorized lookup over (R, 4) count rows; failures come back as NaN.

    Same cell arithmetic as lookup (exact lattice hits bypass the blend)
    but errors do not interrupt the batch, matching the NaN convention
    of solve_multibit_batch so Monte Carlo callers can drop and count
    bad rows uniformly.
    """
    if not C1 > 0.0 or not math.isfinite(C1):
        raise ValueError("C1 must be positive and finite")
    if mode not in ("interp", "nearest"):
        raise ValueError(f"unknown lookup mode {mode!r}")
    counts = np.asarray(counts)
    if counts.ndim != 2 or counts.shape[1] != 4:
        raise ValueError("counts must be an (R, 4) array of bin counts")
    n = counts.sum(axis=1).astype(np.int64)
    if np.any(n < 1):
        raise ValueError("counts are empty")
    T = table.T
    scaled = counts[:, :3].astype(np.int64) * T
    out = np.full(counts.shape[0], np.nan)

    exact = (scaled % n[:, None] == 0).all(axis=1)
    if exact.any():
        idx = scaled[exact] // n[exact, None]
        out[exact] = table.entries[_flat_index(T, idx[:, 0], idx[:, 1], idx[:, 2])]

    rest = ~exact
    if rest.any():
        x = scaled[rest] / n[rest, None]
        if mode == "nearest":
            idx = np.rint(x).astype(np.int64)
            over = idx.sum(axis=1) - T
            while np.any(over > 0):
                rows = over > 0
                gain = np.where(idx[rows] > 0, idx[rows] - x[rows], -np.inf)
                j = np.argmax(gain, axis=1)
                idx[np.flatnonzero(rows), j] -= 1
                over = idx.sum(axis=1) - T
            out[rest] = table.entries[_flat_index(T, idx[:, 0], idx[:, 1], idx[:, 2])]
        else:
            base = np.floor(x).astype(np.int64)
            frac = x - base
            order = np.argsort(-frac, axis=1, kind="stable")
            corners = np.repeat(base[:, None, :], 4, axis=1)
            rows = np.arange(x.shape[0])
            for t in range(3):
                axis = order[:, t]
                for c in range(t + 1, 4):
                    corners[rows, c, axis] += 1
            phi = np.take_along_axis(frac, order, axis=1)
            weights = np.stack(
                [1.0 - phi[:, 0], phi[:, 0] - phi[:, 1], phi[:, 1] - phi[:, 2], phi[:, 2]],
                axis=1,
            )
            feasible = (corners.sum(axis=2) <= T) & (corners <= T).all(axis=2)
            safe = np.where(feasible[:, :, None], corners, 0)
            vals = table.entries[_flat_index(T, safe[..., 0], safe[..., 1], safe[..., 2])]
            live = feasible & (weights > 0.0) & np.isfinite(vals)
            wsum = np.where(live, weights, 0.0).sum(axis=1)
            num = np.where(live, weights * vals, 0.0).sum(axis=1)
            with np.errstate(invalid="ignore"):
                out[rest] = np.where(wsum > 0.0, num / wsum, np.nan)
    return C1 * out


def save_table(table: MleTable, path) -> None:
    alpha_tag = 0 if is_zero_plus(table.alpha) else 1
    alpha_val = 0.0 if alpha_tag == 0 else float(table.alpha)
    blob = bytearray(_HEADER.pack(_MAGIC, _VERSION, alpha_tag, alpha_val, 3, table.T))
    blob += np.asarray(table.threshold_ratios, dtype="<f8").tobytes()
    blob += table.entries.astype("<f8", copy=False).tobytes()
    Path(path).write_bytes(bytes(blob))


def load_table(path) -> MleTable:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("table file truncated inside the header")
    magic, version, alpha_tag, alpha_val, m, T = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise ValueError("not a table file (bad magic)")
    if version != _VERSION:
        raise ValueError(f"unsupported table version {version}")
    if alpha_tag not in (0, 1):
        raise ValueError(f"unknown alpha tag {alpha_tag}")
    if m != 3:
        raise ValueError(f"unsupported scheme size m={m}")
    expected = _HEADER.size + (m - 1) * 8 + _simplex_size(T) * 8
    if len(raw) != expected:
        raise ValueError(f"table file has {len(raw)} bytes, expected {expected}")
    ratios = np.frombuffer(raw, dtype="<f8", count=m - 1, offset=_HEADER.size)
    entries = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size + (m - 1) * 8).copy()
    return MleTable(
        alpha=ZeroPlus if alpha_tag == 0 else alpha_val,
        threshold_ratios=tuple(ratios),
        T=T,
        entries=entries,
    )
