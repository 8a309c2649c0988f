"""Asymptotic accuracy of quantized scale estimators.

The central quantity is the variance coefficient V: for the maximum
likelihood estimate of Lambda from n quantized samples,
n Var / Lambda^2 -> V(alpha, etas), where eta_k = Lambda / C_k are the
thresholds in units of the true scale (decreasing in k).  V is the
inverse Fisher information per sample of the binned likelihood, so it
depends on the scheme only through the etas.

This module computes V, optimizes thresholds to minimize it, and turns
the binomial structure of the 1-bit estimator into Chernoff tail bounds
and sample-complexity guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import PowerStableDist, is_zero_plus, layer_probs, validate_alpha

__all__ = [
    "variance_coefficient",
    "optimize_thresholds",
    "TailConstants",
    "tail_constants",
    "sample_complexity",
    "bias_coefficient_1bit",
]

def _check_etas(etas) -> np.ndarray:
    e = np.atleast_1d(np.asarray(etas, dtype=float))
    if e.ndim != 1 or e.size < 1:
        raise ValueError("etas must be a scalar or 1-d vector")
    if not np.all(np.isfinite(e)) or not np.all(e > 0.0):
        raise ValueError("etas must be positive and finite")
    if np.any(np.diff(e) >= 0.0):
        raise ValueError("etas must be strictly decreasing (thresholds increasing)")
    return e


def _variance_zero_plus(etas: np.ndarray) -> float:
    # In the 0+ limit the Fisher information telescopes into differences
    # of e^eta between neighbouring thresholds.
    with np.errstate(over="ignore", invalid="ignore"):
        info = float(etas[-1] ** 2 / np.expm1(etas[-1]))
        if etas.size > 1:
            d = np.diff(etas)
            info += float(np.sum(d * d / (np.exp(etas[:-1]) - np.exp(etas[1:]))))
    return _safe_inverse(info)


def _variance_general(dist: PowerStableDist, etas: np.ndarray) -> float:
    z = 1.0 / etas  # z_k = 1/eta_k, increasing since etas decrease
    F = np.atleast_1d(dist.cdf(z))
    S = np.atleast_1d(dist.sf(z))
    f = np.atleast_1d(dist.pdf(z))
    a = f * z  # f(1/eta_k) / eta_k
    nums = np.concatenate(([a[0] ** 2], np.diff(a) ** 2, [a[-1] ** 2]))
    dens = layer_probs(F, S)
    # a zero bin probability under a nonzero score difference means two
    # thresholds are indistinguishable in double precision; refuse to
    # grade the scheme rather than report infinite information
    if np.any((dens <= 0.0) & (nums > 0.0)):
        raise ValueError("degenerate scheme: a bin probability underflowed")
    live = dens > 0.0
    info = float(np.sum(nums[live] / dens[live]))
    return _safe_inverse(info)


def _safe_inverse(info: float) -> float:
    if math.isnan(info):
        raise ValueError("degenerate scheme: a bin probability underflowed")
    if info <= 0.0:
        return math.inf
    return 1.0 / info


def variance_coefficient(alpha, etas) -> float:
    """Asymptotic n Var/Lambda^2 for the quantized MLE at normalized
    thresholds ``etas`` (scalar for 1-bit, decreasing vector otherwise)."""
    a = validate_alpha(alpha)
    e = _check_etas(etas)
    if is_zero_plus(a):
        return _variance_zero_plus(e)
    return _variance_general(PowerStableDist(a), e)


# ---------------------------------------------------------------------------
# threshold optimization


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-10):
    """Golden-section minimum of a unimodal fn on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def optimize_thresholds(alpha, m: int):
    """Minimize the variance coefficient over m normalized thresholds.

    Returns (etas, V).  Only m in {1, 3, 5} is supported; those are the
    scheme sizes with a practical payoff, and the multi-start coordinate
    descent below has only been validated there.

    Strategy: solve the 1-bit problem by golden section on log eta, then
    seed geometric ladders around that optimum with ratios 2, 3 and 4
    and run coordinate descent (golden-section line searches on each
    log eta_i, bounded by its neighbours) from each start, keeping the
    best of the three.
    """
    a = validate_alpha(alpha)
    if m not in (1, 3, 5):
        raise ValueError(f"m must be 1, 3 or 5, got {m}")

    if is_zero_plus(a):
        vfun = _variance_zero_plus
    else:
        dist = PowerStableDist(a)
        vfun = lambda e: _variance_general(dist, e)

    def v_of_logs(logs: np.ndarray) -> float:
        try:
            return vfun(np.exp(logs))
        except ValueError:
            return math.inf

    x1, v1 = _golden_min(lambda t: vfun(np.array([math.exp(t)])), math.log(1e-2), math.log(1e2))
    if m == 1:
        return np.array([math.exp(x1)]), v1

    best_logs, best_v = None, math.inf
    for ratio in (2.0, 3.0, 4.0):
        offsets = np.arange(m - 1, -m, -2, dtype=float) / 2.0  # symmetric around 0
        logs = x1 + offsets * math.log(ratio)
        v = v_of_logs(logs)
        for _ in range(200):
            prev = v
            for i in range(m):
                lo = logs[i + 1] + 1e-9 if i + 1 < m else logs[i] - math.log(16.0)
                hi = logs[i - 1] - 1e-9 if i > 0 else logs[i] + math.log(16.0)

                def line(t, i=i):
                    trial = logs.copy()
                    trial[i] = t
                    return v_of_logs(trial)

                t, vt = _golden_min(line, lo, hi, tol=1e-9)
                if vt < v:
                    logs[i], v = t, vt
            if prev - v < 1e-13:
                break
        if v < best_v:
            best_logs, best_v = logs.copy(), v
    return np.exp(best_logs), best_v


# ---------------------------------------------------------------------------
# tail bounds for the 1-bit estimator


@dataclass(frozen=True)
class TailConstants:
    """Chernoff constants for relative error epsilon at normalized threshold eta.

    P(estimate > (1+eps) Lambda) <= exp(-n eps^2 / g_right) and
    P(estimate < (1-eps) Lambda) <= exp(-n eps^2 / g_left); the
    exponent_* fields carry eps^2/g_* directly, which stays meaningful
    at eps = 0 (both zero) and eps = 1 (finite left limit).  g_left is
    None for eps > 1, where the left event is impossible.
    """

    epsilon: float
    g_right: float
    g_left: float | None
    exponent_right: float
    exponent_left: float | None

    def failure_bound(self, n: int) -> float:
        """Union bound on P(relative error > epsilon) with n samples."""
        right = math.exp(-n * self.exponent_right) if self.exponent_right > 0.0 else 1.0
        if self.exponent_left is None:
            return min(right, 1.0)
        left = math.exp(-n * self.exponent_left) if self.exponent_left > 0.0 else 1.0
        return min(right + left, 1.0)


def _bernoulli_kl(dist: PowerStableDist, z_p: float, z_q: float) -> float:
    # KL(Bern(F(z_p)) || Bern(F(z_q))), complements taken through sf so
    # nothing cancels when either cdf sits near 1
    p, q = dist.cdf(z_p), dist.cdf(z_q)
    sp, sq = dist.sf(z_p), dist.sf(z_q)
    return p * math.log(p / q) + sp * math.log(sp / sq)


def tail_constants(alpha, eta: float, epsilon: float) -> TailConstants:
    a = validate_alpha(alpha)
    if not eta > 0.0:
        raise ValueError("eta must be positive")
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    dist = PowerStableDist(a)
    z0 = 1.0 / eta

    if epsilon == 0.0:
        # small-deviation limit: exponent ~ eps^2 / (2 V), so g -> 2V
        g0 = 2.0 * variance_coefficient(a, eta)
        return TailConstants(0.0, g0, g0, 0.0, 0.0)

    e_right = _bernoulli_kl(dist, 1.0 / ((1.0 + epsilon) * eta), z0)
    g_right = epsilon * epsilon / e_right

    if epsilon < 1.0:
        e_left = _bernoulli_kl(dist, 1.0 / ((1.0 - epsilon) * eta), z0)
        g_left = epsilon * epsilon / e_left
    elif epsilon == 1.0:
        # the undershoot event degenerates to "every sample below C";
        # the exponent limit is -log F(1/eta), reached continuously
        e_left = -math.log(dist.cdf(z0))
        g_left = 1.0 / e_left
    else:
        e_left = None
        g_left = None
    return TailConstants(float(epsilon), g_right, g_left, e_right, e_left)


def sample_complexity(alpha, eta: float, epsilon: float, delta: float, exact: bool = False) -> int:
    """Samples needed so P(relative error > epsilon) <= delta.

    The closed-form bound is ceil(log(2/delta) * max(g)/eps^2); with
    ``exact`` the smallest n whose two-sided union bound clears delta is
    found instead (never larger, often 20-40% smaller since one tail
    usually dominates).
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    tc = tail_constants(alpha, eta, epsilon)
    n_bound = math.ceil(math.log(2.0 / delta) / min(tc.exponent_right, tc.exponent_left))
    if not exact:
        return n_bound
    lo, hi = 1, n_bound
    if tc.failure_bound(lo) <= delta:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tc.failure_bound(mid) <= delta:
            hi = mid
        else:
            lo = mid
    return hi


def bias_coefficient_1bit(alpha, eta: float) -> float:
    """Leading bias of the 1-bit estimate: E(Lambda_hat) ~ Lambda (1 + b/n)
    with b the value returned here (can take either sign)."""
    a = validate_alpha(alpha)
    if not eta > 0.0:
        raise ValueError("eta must be positive")
    dist = PowerStableDist(a)
    z = 1.0 / eta
    F0 = dist.cdf(z)
    f0 = dist.pdf(z)
    fp0 = dist.pdf_prime(z)
    phi = eta * eta / (f0 * f0) + eta * fp0 / (2.0 * f0**3)
    return F0 * dist.sf(z) * phi
