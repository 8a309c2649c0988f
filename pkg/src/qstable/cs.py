"""One-scan 1-bit compressed sensing on seeded stable designs.

A K-sparse signal x in R^N is measured through a design of iid
S(alpha, 1) entries at small alpha, and only the measurement signs are
kept.  Because each design entry is the deterministic CMS image of an
(angle, exponential) pair, the whole N x M matrix is regenerated on the
fly from a counter-based stream keyed by row: nothing is stored, and
any row can be revisited in any order or from any worker with identical
bits.

Recovery scans the coordinates once.  For coordinate i the signs of the
measurements are correlated against sgn(u_ij) with weight
exp(-(K-1) w_ij), giving the two log-scores

    Q_i^+ = sum_j log(1 + sgn(y_j) sgn(u_ij) e^{-(K-1) w_ij})
    Q_i^- = sum_j log(1 - sgn(y_j) sgn(u_ij) e^{-(K-1) w_ij})

and the decision +1 if Q_i^+ > 0, -1 if Q_i^- > 0, else 0.  K here is
the stable scale sum_i |x_i|^alpha, which for sign-valued nonzeros is
the sparsity; in practice it is replaced by a quantized estimate, and
``estimate_K_pipeline`` produces that estimate from n auxiliary 1-bit
or 2-bit measurements.

Thresholds in the evaluation pipeline are set as C = Lambda_true/eta,
i.e. relative to the quantity being estimated.  That is a sensitivity
study convention taken from the source experiments, not a deployable
protocol; a real deployment would pick C from a prior guess of K.

Indices here are 0-based throughout, matching numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import cs_prefix_scores
from .coding import BinCounts, ThresholdScheme
from .dist import ZeroPlus, _stable_from_uw, is_zero_plus, validate_alpha
from .estimators import (
    bias_corrected_1bit,
    full_info_harmonic_mean,
    mle_multibit,
)
from .rng import RngStream

__all__ = [
    "SparseSignal",
    "random_signal",
    "DesignMatrixSeeded",
    "MeasurementSet",
    "measure",
    "recover_signs",
    "recovery_error",
    "estimate_K_pipeline",
    "run_recovery_experiment",
    "summarize_errors",
]

_HALF_PI = math.pi / 2.0

# rows regenerated per block during recovery; bounds the working set to
# block x M doubles while amortizing generator setup
_ROW_BLOCK = 32


@dataclass(frozen=True)
class SparseSignal:
    """K-sparse vector given by its support.

    indices are distinct 0-based positions in [0, N); values are the
    matching nonzeros.
    """

    dimension: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or val.shape != idx.shape:
            raise ValueError("indices and values must be matching 1-d arrays")
        if idx.size:
            if idx.min() < 0 or idx.max() >= self.dimension:
                raise ValueError("indices must lie in [0, dimension)")
            if np.unique(idx).size != idx.size:
                raise ValueError("indices must be distinct")
            if not np.all(np.isfinite(val)) or np.any(val == 0.0):
                raise ValueError("values must be finite and nonzero")
        order = np.argsort(idx)
        object.__setattr__(self, "indices", np.ascontiguousarray(idx[order]))
        object.__setattr__(self, "values", np.ascontiguousarray(val[order]))
        self.indices.flags.writeable = False
        self.values.flags.writeable = False

    @property
    def K(self) -> int:
        return int(self.indices.size)

    def sign_vector(self) -> np.ndarray:
        out = np.zeros(self.dimension, dtype=np.int8)
        out[self.indices] = np.sign(self.values).astype(np.int8)
        return out

    def scale(self, alpha) -> float:
        """sum |x_i|^alpha, the quantity the estimators recover."""
        a = validate_alpha(alpha)
        if is_zero_plus(a):
            return float(self.K)
        return float(np.sum(np.abs(self.values) ** a))


def random_signal(dimension: int, K: int, value_scale: float, rng) -> SparseSignal:
    """Uniform random support with centered Gaussian nonzeros."""
    if not 1 <= K <= dimension:
        raise ValueError("need 1 <= K <= dimension")
    idx = rng.choice(dimension, size=K, replace=False)
    val = rng.normal(0.0, value_scale, size=K)
    while np.any(val == 0.0):  # probability-zero guard, keeps the invariant
        val[val == 0.0] = rng.normal(0.0, value_scale, size=int((val == 0.0).sum()))
    return SparseSignal(dimension=dimension, indices=idx, values=val)


@dataclass(frozen=True)
class DesignMatrixSeeded:
    """N x M stable design held as a seed, not as numbers.

    Row i lives on substream i+1 of the stream (substream 0 is left to
    the caller, e.g. for signal generation), drawn as the full angle
    row then the full exponential row.  Entries s_ij are the CMS image
    of those pairs.
    """

    N: int
    M: int
    alpha: float
    stream: RngStream

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be positive")
        a = validate_alpha(self.alpha)
        if is_zero_plus(a):
            raise ValueError("design entries need a real alpha (no 0+ samples exist)")
        object.__setattr__(self, "alpha", float(a))
        if not isinstance(self.stream, RngStream):
            raise TypeError("stream must be an RngStream")

    def row_uw(self, i: int):
        """The (u, w) pair underlying row i, regenerated from the seed."""
        if not 0 <= i < self.N:
            raise IndexError(f"row {i} outside [0, {self.N})")
        gen = self.stream.generator(substream=i + 1)
        u = gen.uniform(-_HALF_PI, _HALF_PI, self.M)
        w = gen.standard_exponential(self.M)
        return u, w

    def row(self, i: int) -> np.ndarray:
        """Stable entries s_ij of row i."""
        u, w = self.row_uw(i)
        return _stable_from_uw(u, np.maximum(w, np.finfo(float).tiny), self.alpha)


@dataclass(frozen=True)
class MeasurementSet:
    """Linear measurements and their signs (sign(0) mapped to +1)."""

    y: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        s = np.ascontiguousarray(self.signs, dtype=np.int8)
        if y.ndim != 1 or s.shape != y.shape:
            raise ValueError("y and signs must be matching 1-d arrays")
        if not np.array_equal(s, np.where(y >= 0.0, 1, -1).astype(np.int8)):
            raise ValueError("signs must equal sign(y) with sign(0) = +1")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "signs", s)
        self.y.flags.writeable = False
        self.signs.flags.writeable = False


def measure(x: SparseSignal, design: DesignMatrixSeeded) -> MeasurementSet:
    """y_j = sum_i x_i s_ij, touching only the K support rows.

    Support rows are accumulated in ascending index order with scalar
    updates, so the result is bit-identical regardless of how many
    workers later replay the design.
    """
    if x.dimension != design.N:
        raise ValueError(f"signal dimension {x.dimension} != design N {design.N}")
    y = np.zeros(design.M)
    for i, v in zip(x.indices, x.values):
        y += v * design.row(int(i))
    return MeasurementSet(y=y, signs=np.where(y >= 0.0, 1, -1).astype(np.int8))


def _sign_pm1(a: np.ndarray) -> np.ndarray:
    return np.where(a >= 0.0, 1.0, -1.0)


def recover_signs(
    signs,
    design: DesignMatrixSeeded,
    K_hat: float,
    return_tie_count: bool = False,
):
    """Estimated sign in {-1, 0, +1} per coordinate from measurement signs.

    Implements the one-scan decision rule with K replaced by K_hat.
    Q+ and Q- are provably never simultaneously positive for the exact
    per-measurement terms; if floating-point evaluation ever produces
    that, the coordinate abstains (0) and the event is counted, which
    ``return_tie_count=True`` exposes as a second return value.
    """
    if not K_hat > 0.0 or not math.isfinite(K_hat):
        raise ValueError("K_hat must be positive and finite")
    s = np.asarray(signs)
    if s.shape != (design.M,):
        raise ValueError(f"signs must have length M={design.M}")
    sy = s.astype(np.float64)
    out = np.empty(design.N, dtype=np.int8)
    checkpoints = np.array([design.M], dtype=np.int64)
    ties = 0
    for lo in range(0, design.N, _ROW_BLOCK):
        hi = min(lo + _ROW_BLOCK, design.N)
        sp = np.empty((hi - lo, design.M))
        ww = np.empty((hi - lo, design.M))
        for r in range(lo, hi):
            u, w = design.row_uw(r)
            sp[r - lo] = sy * _sign_pm1(u)
            ww[r - lo] = w
        qp, qm = cs_prefix_scores(sp, ww, K_hat, checkpoints)
        qp, qm = qp[:, 0], qm[:, 0]
        block = np.zeros(hi - lo, dtype=np.int8)
        pos_p, pos_m = qp > 0.0, qm > 0.0
        both = pos_p & pos_m
        ties += int(both.sum())
        block[pos_p & ~both] = 1
        block[pos_m & ~both] = -1
        out[lo:hi] = block
    if return_tie_count:
        return out, ties
    return out


def recovery_error(estimated_signs, truth: SparseSignal) -> float:
    """sum_i |estimated_sign_i - true_sign_i| / K.

    A flipped nonzero costs 2/K, a missed nonzero or a false detection
    costs 1/K; an all-zero answer therefore scores exactly 1.
    """
    if truth.K == 0:
        raise ValueError("recovery error is undefined for an empty signal")
    est = np.asarray(estimated_signs)
    if est.shape != (truth.dimension,):
        raise ValueError("estimated signs must cover every coordinate")
    diff = est.astype(np.int64) - truth.sign_vector().astype(np.int64)
    return float(np.abs(diff).sum()) / truth.K


def _as_pipeline_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, RngStream):
        return seed.generator()
    return RngStream(seed=int(seed)).generator()


def _aux_measurements(x: SparseSignal, alpha: float, n: int, gen: np.random.Generator):
    # fresh stable entries for the estimation measurements only; the
    # recovery design is not reused
    u = gen.uniform(-_HALF_PI, _HALF_PI, (x.K, n))
    w = np.maximum(gen.standard_exponential((x.K, n)), np.finfo(float).tiny)
    s = _stable_from_uw(u, w, alpha)
    return x.values @ s


def _k_hat_from_powered(powered: np.ndarray, C: float, scheme_bits: int) -> float:
    n = powered.size
    if scheme_bits == 1:
        n1 = int(np.count_nonzero(powered <= C))
        counts = BinCounts(counts=np.array([n1, n - n1], dtype=np.int64))
        return bias_corrected_1bit(counts, C, ZeroPlus)
    # 2-bit ladder anchored at C with ratio 3, so eta at the top
    # threshold equals the requested eta
    thresholds = np.array([C / 9.0, C / 3.0, C])
    scheme = ThresholdScheme(alpha=ZeroPlus, thresholds=thresholds)
    idx = np.searchsorted(thresholds, powered, side="left")
    counts = BinCounts(counts=np.bincount(idx, minlength=4).astype(np.int64))
    return mle_multibit(counts, scheme).corrected


def estimate_K_pipeline(
    x: SparseSignal,
    alpha: float,
    n: int,
    eta: float,
    scheme_bits: int = 1,
    seed=0,
) -> float:
    """Quantized estimate of sum |x_i|^alpha from n auxiliary measurements.

    Draws n fresh stable measurements of x at the given (real) alpha,
    quantizes the powered magnitudes |y_j|^alpha against C =
    Lambda_true/eta (one threshold for scheme_bits=1, the (C/9, C/3, C)
    ladder for scheme_bits=2) and returns the bias-corrected estimate
    in the 0+ limit, which is the regime the recovery rule consumes.
    """
    a = validate_alpha(alpha)
    if is_zero_plus(a):
        raise ValueError("auxiliary measurements need a real alpha")
    if n < 1:
        raise ValueError("n must be positive")
    if not eta > 0.0 or not math.isfinite(eta):
        raise ValueError("eta must be positive and finite")
    if scheme_bits not in (1, 2):
        raise ValueError("scheme_bits must be 1 or 2")
    if x.K == 0:
        raise ValueError("cannot estimate the scale of an empty signal")
    gen = _as_pipeline_generator(seed)
    lam_true = x.scale(a)
    y = _aux_measurements(x, float(a), n, gen)
    return _k_hat_from_powered(np.abs(y) ** a, lam_true / eta, scheme_bits)


# ---------------------------------------------------------------------------
# the end-to-end experiment


def _zeta_checkpoints(zetas, N: int, K: int) -> np.ndarray:
    ms = np.array([int(round(z * K * math.log(N / 0.01))) for z in zetas], dtype=np.int64)
    if np.any(ms < 1) or np.any(np.diff(ms) <= 0):
        raise ValueError("zetas must be positive and strictly increasing")
    return ms


def run_recovery_experiment(
    N: int = 1000,
    K: int = 20,
    value_scale: float = 5.0,
    zetas=(2.0, 5.0, 10.0, 20.0),
    n_list=(20, 50, 100),
    eta_list=(0.2, 0.5, 1.5, 2.0, 3.0),
    trials: int = 1000,
    seed: int = 0,
    alpha: float = 0.05,
    scheme_bits: int = 1,
    quantiles=(0.5, 0.75, 0.95),
    include_true_k: bool = True,
    include_full_info: bool = True,
    trial_range=None,
):
    """Sign-recovery error quantiles across measurement budgets and K sources.

    One design of M_max columns is drawn per trial and every zeta is
    evaluated as a prefix of it, so the curves differ only in how many
    measurements they use.  Per trial, substream 0 generates the
    signal, substreams 1..N the design rows, substream N+1 the
    auxiliary estimation measurements (shared across n and eta: larger
    n extends the same draw, different eta re-thresholds it).

    Returns (rows, diagnostics): rows are dicts keyed like the CSV
    columns (trial, zeta, n, eta, estimator, quantile, error) where
    ``trial`` counts the trials aggregated into the row and n/eta are
    None for estimator variants they do not apply to; diagnostics
    currently carries the simultaneous-positivity count.
    """
    zetas = tuple(float(z) for z in zetas)
    checkpoints = _zeta_checkpoints(zetas, N, K)
    m_max = int(checkpoints[-1])
    n_list = tuple(int(n) for n in n_list)
    n_max = max(n_list)
    a = float(validate_alpha(alpha))

    variants = []  # (estimator, n, eta) with None meaning not applicable
    if include_true_k:
        variants.append(("true-k", None, None))
    if include_full_info:
        variants.extend(("full-info", n, None) for n in n_list)
    variants.extend(("1bit" if scheme_bits == 1 else "2bit", n, e) for n in n_list for e in eta_list)

    lo, hi = (0, trials) if trial_range is None else trial_range
    errors = np.full((len(variants), len(zetas), hi - lo), np.nan)
    ties_total = 0
    for t in range(lo, hi):
        stream = RngStream(seed=seed, stream_id=t)
        x = random_signal(N, K, value_scale, stream.generator(substream=0))
        design = DesignMatrixSeeded(N=N, M=m_max, alpha=a, stream=stream)
        ms = measure(x, design)
        lam_true = x.scale(a)

        aux = _aux_measurements(x, a, n_max, stream.generator(substream=N + 1))
        powered = np.abs(aux) ** a
        k_hats = []
        for estimator, n, eta in variants:
            if estimator == "true-k":
                k_hats.append(lam_true)
            elif estimator == "full-info":
                k_hats.append(full_info_harmonic_mean(aux[:n], a))
            else:
                k_hats.append(_k_hat_from_powered(powered[:n], lam_true / eta, scheme_bits))

        sign_true = x.sign_vector().astype(np.int64)
        sy = ms.signs.astype(np.float64)
        abs_err = np.zeros((len(variants), len(zetas)))
        for blk in range(0, N, _ROW_BLOCK):
            top = min(blk + _ROW_BLOCK, N)
            sp = np.empty((top - blk, m_max))
            ww = np.empty((top - blk, m_max))
            for r in range(blk, top):
                u, w = design.row_uw(r)
                sp[r - blk] = sy * _sign_pm1(u)
                ww[r - blk] = w
            for v, k_hat in enumerate(k_hats):
                qp, qm = cs_prefix_scores(sp, ww, k_hat, checkpoints)
                pos_p, pos_m = qp > 0.0, qm > 0.0
                both = pos_p & pos_m
                ties_total += int(both.sum())
                est = np.zeros(qp.shape, dtype=np.int64)
                est[pos_p & ~both] = 1
                est[pos_m & ~both] = -1
                abs_err[v] += np.abs(est - sign_true[blk:top, None]).sum(axis=0)
        errors[:, :, t - lo] = abs_err / K

    rows = summarize_errors(variants, zetas, errors, quantiles)
    return rows, {"simultaneous_positive": ties_total, "errors": errors, "variants": variants}


def summarize_errors(variants, zetas, errors, quantiles):
    """Quantile rows for an (variants, zetas, trials) error array.

    Split runs (trial_range chunks) concatenate their error arrays along
    the last axis and summarize once, so the quantiles always see every
    trial.
    """
    errors = np.asarray(errors)
    rows = []
    for v, (estimator, n, eta) in enumerate(variants):
        for zi, zeta in enumerate(zetas):
            for q in quantiles:
                rows.append(
                    {
                        "trial": errors.shape[2],
                        "zeta": float(zeta),
                        "n": n,
                        "eta": eta,
                        "estimator": estimator,
                        "quantile": float(q),
                        "error": float(np.quantile(errors[v, zi], q)),
                    }
                )
    return rows
