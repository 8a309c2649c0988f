"""Pure-numpy implementations of the two hot kernels.

The compiled twin in ``qstable._ext`` carries the same signatures and
the dispatcher in ``qstable._kernels`` picks whichever is importable.
Each path is deterministic on its own; across paths results agree only
statistically (different libm/SIMD rounding in the last ulp), which is
why tests compare them with tolerances instead of bit equality.

Contracts kept deliberately thin: callers own argument validation,
these functions own the arithmetic.  alpha == 0.0 encodes the 0+ limit,
where the powered draw is 1/w and u is ignored (may be None).
"""

from __future__ import annotations

import numpy as np

_TINY = np.finfo(float).tiny


def power_bin_counts(u, w, alpha: float, lam: float, thresholds) -> np.ndarray:
    """Row-wise histogram of lam * |s(u, w)|^alpha against thresholds.

    u, w are (R, n) CMS draws (angle, exponential); returns (R, m+1)
    int64 counts binned exactly like the coding module (value equal to
    a threshold falls in the lower bin).
    """
    w = np.maximum(np.asarray(w, dtype=float), _TINY)
    C = np.asarray(thresholds, dtype=float)
    if alpha == 0.0:
        z = lam / w
    else:
        u = np.asarray(u, dtype=float)
        g = np.abs(np.sin(alpha * u)) ** alpha / np.cos(u)
        z = lam * g * (np.cos((1.0 - alpha) * u) / w) ** (1.0 - alpha)
    idx = np.zeros(z.shape, dtype=np.int64)
    for c in C:
        idx += z > c
    counts = np.empty((z.shape[0], C.size + 1), dtype=np.int64)
    for b in range(C.size + 1):
        counts[:, b] = np.count_nonzero(idx == b, axis=1)
    return counts


def cs_prefix_scores(sign_prod, w, k_hat: float, checkpoints):
    """Q+ and Q- accumulated over measurement prefixes.

    sign_prod is (B, M) of +-1 values sgn(y_j) * sgn(u_ij), w the
    matching exponentials.  Returns (qp, qm), each (B, P), holding the
    sums over the first checkpoints[p] measurements.  k_hat < 1 makes
    the Q- logarithm argument negative for some draws; the NaNs that
    produces are intentional (the decision rule then abstains).
    """
    sp = np.asarray(sign_prod, dtype=float)
    w = np.asarray(w, dtype=float)
    cp = np.asarray(checkpoints, dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = sp * np.exp(-(k_hat - 1.0) * w)
        qp = np.cumsum(np.log1p(t), axis=1)[:, cp - 1]
        qm = np.cumsum(np.log1p(-t), axis=1)[:, cp - 1]
    return qp, qm
