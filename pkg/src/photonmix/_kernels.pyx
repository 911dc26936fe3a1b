# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, isfinite, NAN

from photonmix._kernels_py import _PI_M14

cnp.import_array()


def hermite_function(int n, xi):
    shape = np.shape(xi)
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(xi, dtype=np.float64).ravel()
    # the Gaussian factor comes from numpy so both backends share it bit for bit
    cdef cnp.ndarray[double, ndim=1] out = _PI_M14 * np.exp(-0.5 * x * x)
    cdef cnp.ndarray[double, ndim=1] c1 = np.array([sqrt(2.0 / (k + 1)) for k in range(n)], dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] c2 = np.array([sqrt(<double>k / (k + 1)) for k in range(n)], dtype=np.float64)
    cdef Py_ssize_t i, size = x.shape[0]
    cdef int k
    cdef double prev, cur, nxt, xv
    if n == 0:
        return out.reshape(shape)
    with nogil:
        for i in range(size):
            xv = x[i]
            prev = 0.0
            cur = out[i]
            for k in range(n):
                nxt = c1[k] * xv * cur - c2[k] * prev
                prev = cur
                cur = nxt
            out[i] = cur
    return out.reshape(shape)


cdef inline Py_ssize_t _slot(long j, Py_ssize_t m_count) nogil:
    if j == -2:
        return -1
    if j >= 0:
        return j
    return m_count


cdef inline double _extrapolate(double r1, double r2, double r3, double t, double s3) nogil:
    return (r1 * (t + 1.0) * (t - s3) / -s3
            + r2 * t * (t - s3) / (1.0 + s3)
            + r3 * t * (t + 1.0) / (s3 * (s3 + 1.0)))


cdef double _walk(double[::1] a, double[::1] rho, double b, double p,
                  long[::1] order, long[::1] nb1, long[::1] nb2, double[::1] t,
                  long[::1] nb3, double[::1] s3, long[::1] edge_i, long[::1] edge_j,
                  double[::1] vals, double[::1] ratio, double[::1] signs) nogil:
    cdef Py_ssize_t m_count = a.shape[0]
    cdef Py_ssize_t k, m, i1, i2, i3
    cdef bint take_plus
    cdef double am, pred, plus, minus, diff, penalty = 0.0
    vals[m_count] = p
    ratio[m_count] = p / b
    for k in range(m_count):
        m = order[k]
        i1 = _slot(nb1[m], m_count)
        i2 = _slot(nb2[m], m_count)
        i3 = _slot(nb3[m], m_count)
        am = a[m]
        plus = (am * p + rho[m]) / b
        minus = (am * p - rho[m]) / b
        if i2 >= 0 and am != 0.0 and isfinite(ratio[i1]) and isfinite(ratio[i2]):
            if i3 >= 0 and isfinite(ratio[i3]):
                pred = _extrapolate(ratio[i1], ratio[i2], ratio[i3], t[m], s3[m])
            else:
                pred = ratio[i1] + t[m] * (ratio[i1] - ratio[i2])
            take_plus = fabs(plus / am - pred) <= fabs(minus / am - pred)
        else:
            pred = vals[i1]
            if i2 >= 0:
                pred = pred + t[m] * (vals[i1] - vals[i2])
            take_plus = fabs(plus - pred) <= fabs(minus - pred)
        if take_plus:
            vals[m] = plus
            signs[m] = 1.0
        else:
            vals[m] = minus
            signs[m] = -1.0
        if am != 0.0:
            ratio[m] = vals[m] / am
        else:
            ratio[m] = NAN
    for k in range(edge_i.shape[0]):
        diff = vals[edge_i[k]] - vals[edge_j[k]]
        penalty += diff * diff
    return penalty


cdef class _Geometry:
    cdef long[::1] order, nb1, nb2, nb3, edge_i, edge_j
    cdef double[::1] t, s3

    def __init__(self, order, nb1, nb2, t, nb3, s3, edge_i, edge_j):
        self.order = np.ascontiguousarray(order, dtype=np.int64)
        self.nb1 = np.ascontiguousarray(nb1, dtype=np.int64)
        self.nb2 = np.ascontiguousarray(nb2, dtype=np.int64)
        self.t = np.ascontiguousarray(t, dtype=np.float64)
        self.nb3 = np.ascontiguousarray(nb3, dtype=np.int64)
        self.s3 = np.ascontiguousarray(s3, dtype=np.float64)
        self.edge_i = np.ascontiguousarray(edge_i, dtype=np.int64)
        self.edge_j = np.ascontiguousarray(edge_j, dtype=np.int64)


def branch_walk(a, rho, double b, double p, order, nb1, nb2, t, nb3, s3, edge_i, edge_j):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] rv = np.ascontiguousarray(rho, dtype=np.float64)
    cdef _Geometry g = _Geometry(order, nb1, nb2, t, nb3, s3, edge_i, edge_j)
    cdef Py_ssize_t m_count = av.shape[0]
    vals = np.empty(m_count + 1)
    ratio = np.empty(m_count + 1)
    signs = np.zeros(m_count)
    cdef double penalty = _walk(av, rv, b, p, g.order, g.nb1, g.nb2, g.t, g.nb3, g.s3,
                                g.edge_i, g.edge_j, vals, ratio, signs)
    return vals[:m_count].copy(), signs, penalty


def penalty_scan(a, rho, double b, p_values, order, nb1, nb2, t, nb3, s3, edge_i, edge_j):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] rv = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p_values, dtype=np.float64)
    cdef _Geometry geo = _Geometry(order, nb1, nb2, t, nb3, s3, edge_i, edge_j)
    cdef Py_ssize_t g, m_count = av.shape[0]
    cdef double[::1] vals = np.empty(m_count + 1)
    cdef double[::1] ratio = np.empty(m_count + 1)
    cdef double[::1] signs = np.empty(m_count)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov_out = out
    with nogil:
        for g in range(pv.shape[0]):
            ov_out[g] = _walk(av, rv, b, pv[g], geo.order, geo.nb1, geo.nb2, geo.t, geo.nb3, geo.s3,
                              geo.edge_i, geo.edge_j, vals, ratio, signs)
    return out
