"""Replicated Monte Carlo evaluation of the quantized estimators.

Every replicate owns a full RngStream (stream_id = base + r), so a run
sharded over processes produces the same numbers as a serial one and
the same replicate can be replayed in isolation.  Generation happens in
row blocks that are pushed through the fused sample-and-bin kernel;
block size only affects memory, not results.

The generation alpha and the estimation alpha are separate arguments
throughout: the estimators' 0+ limit is routinely applied to data
generated at a small real alpha like 0.05, and quantifying that
mismatch is one of the jobs of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import power_bin_counts
from .analysis import tail_constants, variance_coefficient
from .coding import ThresholdScheme
from .dist import is_zero_plus, validate_alpha
from .estimators import _correction_factor_batch, estimate_1bit_batch, solve_multibit_batch
from .rng import RngStream

__all__ = [
    "sample_bin_counts",
    "simulate_1bit",
    "simulate_multibit",
    "simulate_tails",
    "Simulated1Bit",
    "SimulatedMultibit",
    "SimulatedTails",
]

_HALF_PI = math.pi / 2.0

# block the replicate axis so u/w buffers stay near 32 MB
_BLOCK_ELEMENTS = 1 << 22


def _check_counts_args(lam: float, n: int, replicates: int):
    if not lam > 0.0 or not math.isfinite(lam):
        raise ValueError("lam must be positive and finite")
    if n < 1 or replicates < 1:
        raise ValueError("n and replicates must be positive")


def sample_bin_counts(
    alpha_gen,
    lam: float,
    thresholds,
    n: int,
    replicates: int,
    stream: RngStream,
) -> np.ndarray:
    """(replicates, m+1) bin counts of n quantized samples at scale lam.

    Replicate r draws from stream.child(stream.stream_id + r); the 0+
    generator draws only the exponential half of the CMS pair, matching
    sample_power_stable.
    """
    a = validate_alpha(alpha_gen)
    C = np.asarray(thresholds, dtype=float)
    _check_counts_args(lam, n, replicates)
    zero_plus = is_zero_plus(a)
    kernel_alpha = 0.0 if zero_plus else float(a)
    out = np.empty((replicates, C.size + 1), dtype=np.int64)
    rows = max(1, _BLOCK_ELEMENTS // n)
    for lo in range(0, replicates, rows):
        hi = min(lo + rows, replicates)
        w = np.empty((hi - lo, n))
        u = None if zero_plus else np.empty((hi - lo, n))
        for r in range(lo, hi):
            gen = stream.child(stream.stream_id + r).generator()
            if not zero_plus:
                u[r - lo] = gen.uniform(-_HALF_PI, _HALF_PI, n)
            w[r - lo] = gen.standard_exponential(n)
        out[lo:hi] = power_bin_counts(u, w, kernel_alpha, lam, C)
    return out


@dataclass(frozen=True)
class Simulated1Bit:
    n: int
    replicates: int
    lam: float
    eta: float
    mse: float
    mse_corrected: float
    bias: float
    bias_corrected: float
    variance_coefficient: float

    @property
    def normalized_mse(self) -> float:
        """n MSE / lam^2, comparable to the variance coefficient."""
        return self.n * self.mse / self.lam**2

    @property
    def normalized_mse_corrected(self) -> float:
        return self.n * self.mse_corrected / self.lam**2


def simulate_1bit(
    alpha_gen,
    alpha_est,
    eta: float,
    n: int,
    replicates: int,
    stream: RngStream,
    lam: float = 1.0,
) -> Simulated1Bit:
    """MSE and bias of the 1-bit estimate and its corrected companion."""
    if not eta > 0.0:
        raise ValueError("eta must be positive")
    C = lam / eta
    counts = sample_bin_counts(alpha_gen, lam, [C], n, replicates, stream)
    est, corr = estimate_1bit_batch(counts[:, 0], n, C, alpha_est)
    return Simulated1Bit(
        n=n,
        replicates=replicates,
        lam=lam,
        eta=eta,
        mse=float(np.mean((est - lam) ** 2)),
        mse_corrected=float(np.mean((corr - lam) ** 2)),
        bias=float(np.mean(est) - lam),
        bias_corrected=float(np.mean(corr) - lam),
        variance_coefficient=variance_coefficient(alpha_est, eta),
    )


@dataclass(frozen=True)
class SimulatedMultibit:
    n: int
    replicates: int
    lam: float
    etas: np.ndarray
    mse: float
    mse_corrected: float
    bias: float
    bias_corrected: float
    variance_coefficient: float
    solver_failures: int

    @property
    def normalized_mse(self) -> float:
        return self.n * self.mse / self.lam**2

    @property
    def normalized_mse_corrected(self) -> float:
        return self.n * self.mse_corrected / self.lam**2


def simulate_multibit(
    alpha_gen,
    alpha_est,
    etas,
    n: int,
    replicates: int,
    stream: RngStream,
    lam: float = 1.0,
    return_estimates: bool = False,
):
    """Replicated multibit MLE with the 2-bit second-order correction.

    etas is the decreasing normalized-threshold vector; thresholds are
    lam/etas.  Rows the batch solver cannot place (sentinel NaN) are
    dropped from the averages and counted in solver_failures.  With
    ``return_estimates`` the per-replicate estimate array rides along
    for callers that need more than the summary (table comparisons).
    """
    e = np.asarray(etas, dtype=float)
    a_est = validate_alpha(alpha_est)
    C = lam / e
    scheme = ThresholdScheme(alpha=a_est, thresholds=C)
    counts = sample_bin_counts(alpha_gen, lam, C, n, replicates, stream)
    est = solve_multibit_batch(counts.astype(float), C, a_est)
    ok = np.isfinite(est)
    corr = est.copy()
    if scheme.m == 3 and ok.any():
        factor = _correction_factor_batch(scheme, est[ok], n)
        corr[ok] = np.where(np.isfinite(factor) & (factor > 0.0), est[ok] / factor, est[ok])
    good_est, good_corr = est[ok], corr[ok]
    summary = SimulatedMultibit(
        n=n,
        replicates=replicates,
        lam=lam,
        etas=e,
        mse=float(np.mean((good_est - lam) ** 2)),
        mse_corrected=float(np.mean((good_corr - lam) ** 2)),
        bias=float(np.mean(good_est) - lam),
        bias_corrected=float(np.mean(good_corr) - lam),
        variance_coefficient=variance_coefficient(a_est, e),
        solver_failures=int((~ok).sum()),
    )
    if return_estimates:
        return summary, counts, est, corr
    return summary


@dataclass(frozen=True)
class SimulatedTails:
    epsilon: float
    n: int
    replicates: int
    freq_right: float
    freq_left: float
    bound_right: float
    bound_left: float

    def slack(self, sigmas: float = 3.0):
        """bound + sigmas binomial standard errors, per side."""
        se_r = math.sqrt(self.bound_right * (1.0 - self.bound_right) / self.replicates)
        se_l = math.sqrt(self.bound_left * (1.0 - self.bound_left) / self.replicates)
        return self.bound_right + sigmas * se_r, self.bound_left + sigmas * se_l


def simulate_tails(
    alpha,
    eta: float,
    epsilon: float,
    n: int,
    replicates: int,
    stream: RngStream,
    lam: float = 1.0,
) -> SimulatedTails:
    """Empirical over/undershoot frequencies of the raw 1-bit MLE
    against their Chernoff bounds."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1) for two-sided frequencies")
    C = lam / eta
    counts = sample_bin_counts(alpha, lam, [C], n, replicates, stream)
    est, _ = estimate_1bit_batch(counts[:, 0], n, C, alpha)
    tc = tail_constants(alpha, eta, epsilon)
    ex = n * epsilon * epsilon
    return SimulatedTails(
        epsilon=epsilon,
        n=n,
        replicates=replicates,
        freq_right=float(np.mean(est > (1.0 + epsilon) * lam)),
        freq_left=float(np.mean(est < (1.0 - epsilon) * lam)),
        bound_right=min(1.0, math.exp(-ex / tc.g_right)),
        bound_left=min(1.0, math.exp(-ex / tc.g_left)),
    )
