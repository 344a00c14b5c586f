# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled run-length partial-sum kernel."""

import numpy as np


def partial_sums_at(values, counts, checkpoints):
    """Sum of the first N terms of the (value, count)-run sequence for
    each N in checkpoints; pro-rata inside a run; raises past the end."""
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    c_arr = np.ascontiguousarray(counts, dtype=np.int64)
    n_arr = np.ascontiguousarray(checkpoints, dtype=np.int64)
    order_arr = np.argsort(n_arr, kind='stable').astype(np.int64)
    out_arr = np.empty(len(n_arr), dtype=np.float64)

    cdef double[::1] v = v_arr
    cdef long long[::1] c = c_arr
    cdef long long[::1] ns = n_arr
    cdef long long[::1] order = order_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t nruns = v.shape[0]
    cdef Py_ssize_t nchk = ns.shape[0]
    cdef double run_sum = 0.0
    cdef long long seen = 0
    cdef Py_ssize_t i = 0, k
    cdef long long n, pos
    for k in range(nchk):
        pos = order[k]
        n = ns[pos]
        while i < nruns and seen + c[i] < n:
            run_sum += v[i] * c[i]
            seen += c[i]
            i += 1
        if i >= nruns and seen < n:
            raise ValueError("checkpoint beyond enumerated terms")
        if n > seen:
            out[pos] = run_sum + (n - seen) * v[i]
        else:
            out[pos] = run_sum
    return out_arr
