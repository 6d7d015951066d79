# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the numeric hot loops.

Semantics match `nomadj._kernels_py` exactly (same arguments, same
tie-breaking); that module is the reference implementation.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()


def viterbi_kernel(double[:, ::1] emit, double[::1] start,
                   double[:, ::1] trans, double[::1] stop):
    """Best-scoring state path; see _kernels_py.viterbi_kernel."""
    cdef Py_ssize_t n = emit.shape[0]
    cdef Py_ssize_t n_states = emit.shape[1]
    delta_arr = np.empty((n, n_states), dtype=np.float64)
    backs_arr = np.empty((n, n_states), dtype=np.intp)
    cdef double[:, ::1] delta = delta_arr
    cdef cnp.intp_t[:, ::1] backs = backs_arr
    cdef Py_ssize_t i, s, t, arg, state
    cdef double best, v

    for t in range(n_states):
        delta[0, t] = start[t] + emit[0, t]
    for i in range(1, n):
        for t in range(n_states):
            best = delta[i - 1, 0] + trans[0, t]
            arg = 0
            for s in range(1, n_states):
                v = delta[i - 1, s] + trans[s, t]
                if v > best:
                    best = v
                    arg = s
            delta[i, t] = best + emit[i, t]
            backs[i, t] = arg

    best = delta[n - 1, 0] + stop[0]
    state = 0
    for t in range(1, n_states):
        v = delta[n - 1, t] + stop[t]
        if v > best:
            best = v
            state = t

    path = [0] * n
    path[n - 1] = state
    for i in range(n - 1, 0, -1):
        state = backs[i, state]
        path[i - 1] = state
    return path, best


def maxent_obj_grad_kernel(int[::1] indptr, int[::1] indices, int[::1] gold,
                           double[:, ::1] weights, bint want_grad=True):
    """Softmax log-likelihood and gradient; see _kernels_py for semantics."""
    cdef Py_ssize_t n_examples = gold.shape[0]
    cdef Py_ssize_t n_labels = weights.shape[1]
    cdef Py_ssize_t ex, j, k, lo, hi, p, g
    cdef double loglik = 0.0
    cdef double high, z, log_z
    scores_arr = np.empty(n_labels, dtype=np.float64)
    probs_arr = np.empty(n_labels, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    cdef double[::1] probs = probs_arr
    grad_arr = np.zeros((weights.shape[0], n_labels), dtype=np.float64) if want_grad else None
    cdef double[:, ::1] grad = grad_arr if want_grad else scores_arr[None, :]

    for ex in range(n_examples):
        lo = indptr[ex]
        hi = indptr[ex + 1]
        for k in range(n_labels):
            scores[k] = 0.0
        for j in range(lo, hi):
            p = indices[j]
            for k in range(n_labels):
                scores[k] += weights[p, k]
        high = scores[0]
        for k in range(1, n_labels):
            if scores[k] > high:
                high = scores[k]
        z = 0.0
        for k in range(n_labels):
            z += exp(scores[k] - high)
        log_z = high + log(z)
        g = gold[ex]
        loglik += scores[g] - log_z
        if want_grad:
            for k in range(n_labels):
                probs[k] = exp(scores[k] - high) / z
            for j in range(lo, hi):
                p = indices[j]
                grad[p, g] += 1.0
                for k in range(n_labels):
                    grad[p, k] -= probs[k]
    return loglik, grad_arr
