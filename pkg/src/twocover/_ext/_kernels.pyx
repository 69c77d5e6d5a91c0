# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-point enumeration; same contract as the pure-Python fallback."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def count_fixed_points(moduli, delta):
    cdef Py_ssize_t n = len(moduli)
    if n == 0:
        return 1
    cdef int64_t *m = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *cols = <int64_t *> malloc(n * n * sizeof(int64_t))
    cdef int64_t *res = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *digits = <int64_t *> malloc(n * sizeof(int64_t))
    if not m or not cols or not res or not digits:
        free(m); free(cols); free(res); free(digits)
        raise MemoryError()
    cdef Py_ssize_t i, k
    cdef int64_t c, old, new, nonzero = 0, count = 0
    try:
        for i in range(n):
            m[i] = moduli[i]
            res[i] = 0
            digits[i] = 0
            for k in range(n):
                cols[k * n + i] = delta[i][k]
        with nogil:
            while True:
                if nonzero == 0:
                    count += 1
                k = 0
                while True:
                    for i in range(n):
                        c = cols[k * n + i]
                        if c:
                            old = res[i]
                            new = old + c
                            if new >= m[i]:
                                new -= m[i]
                            res[i] = new
                            if old == 0:
                                nonzero += 1
                            elif new == 0:
                                nonzero -= 1
                    digits[k] += 1
                    if digits[k] < m[k]:
                        break
                    digits[k] = 0
                    k += 1
                    if k == n:
                        break
                if k == n:
                    break
        return count
    finally:
        free(m); free(cols); free(res); free(digits)
