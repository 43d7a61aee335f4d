# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors _pyimpl exactly (same signatures, same math)."""
from libc.math cimport exp, sqrt, pow


def lj_force_scalar(double d, double a, double b, double delta, double iota):
    return -iota * (pow(a * pow(delta, a) / pow(d, a + 1.0), a)
                    - 2.0 * pow(b * delta / pow(d, b + 1.0), b))


def lj_sum(list rel, int m, double a, double b, double delta, double iota, double d_min):
    cdef int k = len(rel) // m
    cdef int j, c, base
    cdef double d2, d, f, s
    cdef list out = [0.0] * m
    cdef double[8] acc
    if m > 8:
        raise ValueError("dimension > 8 not supported by compiled kernels")
    for c in range(m):
        acc[c] = 0.0
    for j in range(k):
        base = j * m
        d2 = 0.0
        for c in range(m):
            d2 += (<double> rel[base + c]) * (<double> rel[base + c])
        d = sqrt(d2)
        if d < 1e-12:
            continue
        f = lj_force_scalar(d if d > d_min else d_min, a, b, delta, iota)
        s = f / d
        for c in range(m):
            acc[c] += s * (<double> rel[base + c])
    for c in range(m):
        out[c] = acc[c]
    return out


def conn_grad(list rel, list dx2, int m, double sigma_w, double comm_range, double d_min):
    cdef int k = len(rel) // m
    cdef int j, c, base
    cdef int skipped = 0
    cdef double d2, d, s
    cdef double inv_s2 = 1.0 / (sigma_w * sigma_w)
    cdef double[8] acc
    cdef list out = [0.0] * m
    if m > 8:
        raise ValueError("dimension > 8 not supported by compiled kernels")
    for c in range(m):
        acc[c] = 0.0
    for j in range(k):
        base = j * m
        d2 = 0.0
        for c in range(m):
            d2 += (<double> rel[base + c]) * (<double> rel[base + c])
        d = sqrt(d2)
        if d < d_min:
            skipped += 1
            continue
        if d > comm_range:
            continue
        s = exp(-d2 * 0.5 * inv_s2) * inv_s2 * (<double> dx2[j])
        for c in range(m):
            acc[c] += s * (<double> rel[base + c])
    for c in range(m):
        out[c] = acc[c]
    return out, skipped


def lap_row(double x_k, list weights, list xs):
    cdef double deg = 0.0
    cdef double accv = 0.0
    cdef double w
    cdef int j
    for j in range(len(weights)):
        w = <double> weights[j]
        deg += w
        accv += w * (<double> xs[j])
    return deg * x_k - accv
