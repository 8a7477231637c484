# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: projections and the projected-gradient inner loop.

Twin of ``omgd._kernels_py``; see that module for the set/loss encoding.
Arithmetic follows the same operation order as the numpy twin so the two
backends agree to rounding noise.
"""

from libc.math cimport sqrt
from libc.stdlib cimport free, malloc, qsort

import numpy as np

BALL, BOX, SIMPLEX = 0, 1, 2


cdef int _cmp_desc(const void* pa, const void* pb) noexcept nogil:
    cdef double a = (<const double*> pa)[0]
    cdef double b = (<const double*> pb)[0]
    if a < b:
        return 1
    if a > b:
        return -1
    return 0


cdef void _proj_ball(double[::1] z, const double[::1] center,
                     double radius) noexcept nogil:
    cdef Py_ssize_t i, n = z.shape[0]
    cdef double d, s = 0.0, dist, scale
    for i in range(n):
        d = z[i] - center[i]
        s += d * d
    dist = sqrt(s)
    if dist <= radius:
        return
    scale = radius / dist
    for i in range(n):
        z[i] = center[i] + (z[i] - center[i]) * scale


cdef void _proj_box(double[::1] z, const double[::1] lower,
                    const double[::1] upper) noexcept nogil:
    cdef Py_ssize_t i, n = z.shape[0]
    for i in range(n):
        if z[i] < lower[i]:
            z[i] = lower[i]
        elif z[i] > upper[i]:
            z[i] = upper[i]


cdef void _proj_simplex(double[::1] z, double* buf) noexcept nogil:
    # buf is scratch space of length n for the descending sort
    cdef Py_ssize_t i, n = z.shape[0]
    cdef double css = 0.0, theta = 0.0, v
    for i in range(n):
        buf[i] = z[i]
    qsort(buf, n, sizeof(double), _cmp_desc)
    for i in range(n):
        css += buf[i]
        if buf[i] - (css - 1.0) / (i + 1.0) > 0.0:
            theta = (css - 1.0) / (i + 1.0)
    for i in range(n):
        v = z[i] - theta
        z[i] = v if v > 0.0 else 0.0


cdef inline void _project(double[::1] z, int kind, const double[::1] a0,
                          const double[::1] a1, double scal,
                          double* buf) noexcept nogil:
    if kind == 0:
        _proj_ball(z, a0, scal)
    elif kind == 1:
        _proj_box(z, a0, a1)
    else:
        _proj_simplex(z, buf)


def project_ball(x, center, radius):
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] z = out
    cdef const double[::1] c = np.ascontiguousarray(center, dtype=np.float64)
    _proj_ball(z, c, radius)
    return out


def project_box(x, lower, upper):
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] z = out
    cdef const double[::1] lo = np.ascontiguousarray(lower, dtype=np.float64)
    cdef const double[::1] hi = np.ascontiguousarray(upper, dtype=np.float64)
    _proj_box(z, lo, hi)
    return out


def project_simplex(x):
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] z = out
    cdef double* buf = <double*> malloc(z.shape[0] * sizeof(double))
    if buf == NULL:
        raise MemoryError
    try:
        _proj_simplex(z, buf)
    finally:
        free(buf)
    return out


def inner_loop(x, double eta, Py_ssize_t n_steps, h, g, int kind, a0, a1,
               double scal):
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] z = out
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef const double[::1] p0 = np.ascontiguousarray(a0, dtype=np.float64)
    cdef const double[::1] p1 = np.ascontiguousarray(a1, dtype=np.float64)
    cdef Py_ssize_t i, k, n = z.shape[0]
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError
    try:
        with nogil:
            for k in range(n_steps):
                for i in range(n):
                    z[i] = z[i] - eta * (hv[i] * z[i] + gv[i])
                _project(z, kind, p0, p1, scal, buf)
    finally:
        free(buf)
    return out


def inner_loop_to_tol(x, double eta, h, g, int kind, a0, a1, double scal,
                      double tol, Py_ssize_t max_steps):
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] z = out
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef const double[::1] p0 = np.ascontiguousarray(a0, dtype=np.float64)
    cdef const double[::1] p1 = np.ascontiguousarray(a1, dtype=np.float64)
    cdef Py_ssize_t i, it, n = z.shape[0]
    cdef Py_ssize_t done = 0
    cdef double move, d
    cdef double* buf = <double*> malloc(2 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError
    cdef double* prev = buf + n
    try:
        with nogil:
            for it in range(1, max_steps + 1):
                for i in range(n):
                    prev[i] = z[i]
                    z[i] = z[i] - eta * (hv[i] * z[i] + gv[i])
                _project(z, kind, p0, p1, scal, buf)
                move = 0.0
                for i in range(n):
                    d = z[i] - prev[i]
                    move += d * d
                if sqrt(move) < tol:
                    done = it
                    break
    finally:
        free(buf)
    if done == 0:
        raise RuntimeError(
            f"projected gradient did not settle within {max_steps} steps"
        )
    return out, done
