# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Twin of ``_fallback``: same operations in the same order, so both backends
return bit-identical floats. Inputs are contiguous double buffers
(``array.array('d')`` or anything exposing the buffer protocol).
"""

from libc.math cimport exp, fabs, sqrt

BACKEND = "native"


def evaluate_matrix(const double[::1] weights, const double[::1] scores, Py_ssize_t n_alternatives):
    """Weighted-sum evaluation of each alternative (scores row-major by criterion)."""
    cdef Py_ssize_t n_criteria = weights.shape[0]
    cdef Py_ssize_t a, c
    cdef double total
    out = [0.0] * n_alternatives
    for a in range(n_alternatives):
        total = 0.0
        for c in range(n_criteria):
            total += weights[c] * scores[c * n_alternatives + a]
        out[a] = total
    return out


def abs_differences(const double[::1] left, const double[::1] right):
    """Componentwise |left - right|."""
    cdef Py_ssize_t n = left.shape[0]
    cdef Py_ssize_t i
    out = [0.0] * n
    for i in range(n):
        out[i] = fabs(left[i] - right[i])
    return out


def rms_distance(const double[::1] left, const double[::1] right):
    """Root-mean-square distance between two equal-length vectors."""
    cdef Py_ssize_t n = left.shape[0]
    cdef Py_ssize_t i
    cdef double diff, total = 0.0
    for i in range(n):
        diff = left[i] - right[i]
        total += diff * diff
    return sqrt(total / n)


def social_weights(const double[::1] distances, double max_distance,
                   double consensus_level, bint literal, double epsilon):
    """Exponentially decaying weight per distance; 1 within the tolerated band."""
    cdef Py_ssize_t n = distances.shape[0]
    cdef Py_ssize_t i
    cdef double d, excess
    out = [1.0] * n
    for i in range(n):
        d = distances[i]
        if d > max_distance + epsilon:
            excess = d - max_distance
            if literal:
                out[i] = exp(-(consensus_level * excess))
            else:
                out[i] = exp(-excess)
    return out


def weighted_totals(const double[::1] values, const double[::1] weights,
                    Py_ssize_t n_rows, Py_ssize_t n_cols):
    """Column sums of the elementwise product of two row-major matrices."""
    cdef Py_ssize_t r, a, base
    totals = [0.0] * n_cols
    cdef double acc
    for a in range(n_cols):
        acc = 0.0
        for r in range(n_rows):
            acc += values[r * n_cols + a] * weights[r * n_cols + a]
        totals[a] = acc
    return totals
