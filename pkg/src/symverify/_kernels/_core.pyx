# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo sampling core.

Bit-identical twin of `_fallback`; see that module's docstring for the RNG
and draw-layout contract.  Loops run without the GIL so worker threads can
overlap on disjoint trial ranges.
"""

from libc.stdint cimport int64_t, uint8_t, uint64_t

import numpy as np

cdef uint64_t GOLD = 0x9E3779B97F4A7C15U
cdef uint64_t SEED_SALT = 0x6A09E667F3BCC909U
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9U
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBU
    return z ^ (z >> 31)


cdef inline uint64_t _root(uint64_t seed_mixed, uint64_t trial) nogil:
    return _mix(seed_mixed + trial * GOLD)


cdef inline double _uniform(uint64_t root, uint64_t draw) nogil:
    return <double>(_mix(root + (draw + 1U) * GOLD) >> 11) * INV_2_53


cdef inline Py_ssize_t _search_right(const double[::1] cdf, double u) nogil:
    # First index with cdf[idx] > u (np.searchsorted side='right').
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


def stream_uniforms(object seed, object stream, object draw_lo, int n):
    """n consecutive uniforms in [0, 1) from substream `stream` of `seed`."""
    cdef uint64_t root = _root(_mix(<uint64_t>(int(seed) ^ SEED_SALT)),
                               <uint64_t>int(stream))
    cdef uint64_t d0 = <uint64_t>int(draw_lo)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            view[i] = _uniform(root, d0 + <uint64_t>i)
    return out


def sample_symmetrized(object seed, object trial_lo, int n,
                       const double[::1] region_cdf,
                       const uint8_t[::1] nodal,
                       const double[:, ::1] row_cdfs,
                       int max_redraws,
                       int64_t[::1] out_R,
                       int64_t[::1] out_r):
    """Sample n symmetrized trials; returns total redraws or -1 on cap."""
    cdef uint64_t seed_mixed = _mix(<uint64_t>(int(seed) ^ SEED_SALT))
    cdef uint64_t t0 = <uint64_t>int(trial_lo)
    cdef uint64_t root
    cdef Py_ssize_t i, ridx
    cdef int attempt
    cdef int64_t redraws = 0
    cdef bint failed = False
    cdef double u
    with nogil:
        for i in range(n):
            root = _root(seed_mixed, t0 + <uint64_t>i)
            attempt = 0
            while True:
                u = _uniform(root, 2U * <uint64_t>attempt)
                ridx = _search_right(region_cdf, u)
                if not nodal[ridx]:
                    break
                redraws += 1
                attempt += 1
                if attempt > max_redraws:
                    failed = True
                    break
            if failed:
                break
            out_R[i] = ridx
            u = _uniform(root, 2U * <uint64_t>attempt + 1U)
            out_r[i] = _search_right(row_cdfs[ridx], u)
    if failed:
        return -1
    return redraws


def sample_mixture(object seed, object trial_lo, int n,
                   const double[::1] region_cdf,
                   const uint8_t[::1] nodal,
                   const double[::1] w_branch_f,
                   const double[::1] cdf_f,
                   const double[::1] cdf_g,
                   int max_redraws,
                   int64_t[::1] out_R,
                   uint8_t[::1] out_branch,
                   int64_t[::1] out_r):
    """Sample n non-symmetrized trials; returns total redraws or -1 on cap."""
    cdef uint64_t seed_mixed = _mix(<uint64_t>(int(seed) ^ SEED_SALT))
    cdef uint64_t t0 = <uint64_t>int(trial_lo)
    cdef uint64_t root
    cdef Py_ssize_t i, ridx
    cdef int attempt
    cdef int64_t redraws = 0
    cdef bint failed = False
    cdef bint branch_is_f
    cdef double u
    with nogil:
        for i in range(n):
            root = _root(seed_mixed, t0 + <uint64_t>i)
            attempt = 0
            while True:
                u = _uniform(root, 3U * <uint64_t>attempt)
                ridx = _search_right(region_cdf, u)
                if not nodal[ridx]:
                    break
                redraws += 1
                attempt += 1
                if attempt > max_redraws:
                    failed = True
                    break
            if failed:
                break
            out_R[i] = ridx
            u = _uniform(root, 3U * <uint64_t>attempt + 1U)
            branch_is_f = u < w_branch_f[ridx]
            out_branch[i] = 0 if branch_is_f else 1
            u = _uniform(root, 3U * <uint64_t>attempt + 2U)
            if branch_is_f:
                out_r[i] = _search_right(cdf_f, u)
            else:
                out_r[i] = _search_right(cdf_g, u)
    if failed:
        return -1
    return redraws
