# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twins of the numpy kernels in _kernels_py.

Single fused passes over the input rows: no intermediate arrays, one
libm call chain per element.  Semantics documented on the fallback
implementations; keep both in sync.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, log1p, pow, sin

cdef double TINY = 2.2250738585072014e-308


def power_bin_counts(object u, const double[:, ::1] w, double alpha, double lam,
                     const double[::1] thresholds):
    cdef Py_ssize_t R = w.shape[0]
    cdef Py_ssize_t n = w.shape[1]
    cdef Py_ssize_t m = thresholds.shape[0]
    cdef bint zero_plus = alpha == 0.0
    cdef const double[:, ::1] uv = None
    if not zero_plus:
        uv = u
        if uv.shape[0] != R or uv.shape[1] != n:
            raise ValueError("u and w must share a shape")
    out = np.zeros((R, m + 1), dtype=np.int64)
    cdef long long[:, ::1] cv = out
    cdef Py_ssize_t r, j, b
    cdef double wj, z, g
    with nogil:
        for r in range(R):
            for j in range(n):
                wj = w[r, j]
                if wj < TINY:
                    wj = TINY
                if zero_plus:
                    z = lam / wj
                else:
                    g = pow(fabs(sin(alpha * uv[r, j])), alpha) / cos(uv[r, j])
                    z = lam * g * pow(cos((1.0 - alpha) * uv[r, j]) / wj, 1.0 - alpha)
                b = 0
                while b < m and z > thresholds[b]:
                    b += 1
                cv[r, b] += 1
    return out


def cs_prefix_scores(const double[:, ::1] sign_prod, const double[:, ::1] w, double k_hat,
                     object checkpoints):
    cdef long long[::1] cp = np.ascontiguousarray(checkpoints, dtype=np.int64)
    cdef Py_ssize_t B = w.shape[0]
    cdef Py_ssize_t M = w.shape[1]
    cdef Py_ssize_t P = cp.shape[0]
    if sign_prod.shape[0] != B or sign_prod.shape[1] != M:
        raise ValueError("sign_prod and w must share a shape")
    qp_arr = np.empty((B, P), dtype=np.float64)
    qm_arr = np.empty((B, P), dtype=np.float64)
    cdef double[:, ::1] qp = qp_arr
    cdef double[:, ::1] qm = qm_arr
    cdef Py_ssize_t b, j, p
    cdef double accp, accm, t
    cdef double c = k_hat - 1.0
    cdef bint bad = False
    with nogil:
        for b in range(B):
            accp = 0.0
            accm = 0.0
            p = 0
            for j in range(M):
                t = sign_prod[b, j] * exp(-c * w[b, j])
                accp += log1p(t)
                accm += log1p(-t)
                while p < P and cp[p] == j + 1:
                    qp[b, p] = accp
                    qm[b, p] = accm
                    p += 1
            if p != P:
                bad = True
                break
    if bad:
        raise ValueError("checkpoints must be increasing and lie in [1, M]")
    return qp_arr, qm_arr
