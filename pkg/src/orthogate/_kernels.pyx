# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled commutator scan over a stack of square complex matrices."""

import numpy as np

from libc.math cimport sqrt
from libc.stdlib cimport free, malloc


cdef double _commutator_max(const double* re, const double* im, Py_ssize_t n,
                            Py_ssize_t a, Py_ssize_t b, double* rr, double* ri) noexcept nogil:
    # re/im are split planes of shape (K, n, n); rr/ri are length-n scratch rows
    cdef Py_ssize_t nn = n * n
    cdef const double* Ar = re + a * nn
    cdef const double* Ai = im + a * nn
    cdef const double* Br = re + b * nn
    cdef const double* Bi = im + b * nn
    cdef const double* xr
    cdef const double* xi
    cdef const double* yr
    cdef const double* yi
    cdef Py_ssize_t i, j, k
    cdef double ar, ai, br, bi, mag, best = 0.0
    for i in range(n):
        for j in range(n):
            rr[j] = 0.0
            ri[j] = 0.0
        for k in range(n):
            ar = Ar[i * n + k]
            ai = Ai[i * n + k]
            br = Br[i * n + k]
            bi = Bi[i * n + k]
            xr = Br + k * n
            xi = Bi + k * n
            yr = Ar + k * n
            yi = Ai + k * n
            for j in range(n):
                rr[j] += ar * xr[j] - ai * xi[j] - br * yr[j] + bi * yi[j]
                ri[j] += ar * xi[j] + ai * xr[j] - br * yi[j] - bi * yr[j]
        for j in range(n):
            mag = rr[j] * rr[j] + ri[j] * ri[j]
            if mag > best:
                best = mag
    return sqrt(best)


def first_noncommuting(products, double tol):
    """Scan pairs ``a < b`` in lexicographic order.

    Returns ``(a, b, norm)`` for the first pair whose commutator max-norm
    exceeds ``tol``, or ``(-1, -1, worst)`` when every pair commutes.
    """
    arr = np.asarray(products, dtype=np.complex128)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("products must have shape (K, n, n)")
    cdef const double[:, :, ::1] R = np.ascontiguousarray(arr.real)
    cdef const double[:, :, ::1] I = np.ascontiguousarray(arr.imag)
    cdef Py_ssize_t K = R.shape[0], n = R.shape[1]
    cdef Py_ssize_t a, b, hit_a = -1, hit_b = -1
    cdef double c, worst = 0.0, hit = 0.0
    if K < 2 or n == 0:
        return -1, -1, 0.0
    cdef double* scratch = <double*> malloc(2 * n * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        with nogil:
            for a in range(K):
                for b in range(a + 1, K):
                    c = _commutator_max(&R[0, 0, 0], &I[0, 0, 0], n, a, b, scratch, scratch + n)
                    if c > tol:
                        hit_a, hit_b, hit = a, b, c
                        break
                    if c > worst:
                        worst = c
                if hit_a >= 0:
                    break
    finally:
        free(scratch)
    if hit_a >= 0:
        return hit_a, hit_b, hit
    return -1, -1, worst
