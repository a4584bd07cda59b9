# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython implementation of the developing kernels.

Same contract as ``reference.py``; see ``kernels/__init__`` for the
interface documentation.
"""

from libc.math cimport cos, cosh, sin, sinh, M_PI

DEF MAX_N = 64


cdef inline void _mul(double* m, double* k, double* out) nogil:
    out[0] = m[0] * k[0] + m[1] * k[2]
    out[1] = m[0] * k[1] + m[1] * k[3]
    out[2] = m[2] * k[0] + m[3] * k[2]
    out[3] = m[2] * k[1] + m[3] * k[3]


cdef inline void _t_matrix(double length, double* out) nogil:
    cdef double ch = cosh(length / 2.0)
    cdef double sh = sinh(length / 2.0)
    out[0] = ch; out[1] = sh; out[2] = sh; out[3] = ch


cdef inline void _t_dot(double length, double* out) nogil:
    cdef double ch = cosh(length / 2.0) / 2.0
    cdef double sh = sinh(length / 2.0) / 2.0
    out[0] = sh; out[1] = ch; out[2] = ch; out[3] = sh


cdef inline void _r_matrix(double phi, double* out) nogil:
    cdef double c = cos(phi / 2.0)
    cdef double s = sin(phi / 2.0)
    out[0] = c; out[1] = s; out[2] = -s; out[3] = c


cdef int _load(object thetas, object lengths, double* th, double* le) except -1:
    cdef int n = len(thetas)
    if n != len(lengths):
        raise ValueError("angle/length count mismatch")
    if n > MAX_N:
        raise ValueError(f"polygon too large (n > {MAX_N})")
    cdef int i
    for i in range(n):
        th[i] = thetas[i]
        le[i] = lengths[i]
    return n


def develop_chain(thetas, lengths):
    """Develop the side chain; return (points, raw defect matrix)."""
    cdef double th[MAX_N]
    cdef double le[MAX_N]
    cdef int n = _load(thetas, lengths, th, le)
    cdef double g[4]
    cdef double f[4]
    cdef double tmp[4]
    cdef int i
    cdef double den
    g[0] = 1.0; g[1] = 0.0; g[2] = 0.0; g[3] = 1.0
    chain = [(0.0, 1.0)]
    for i in range(n):
        _t_matrix(le[i], f)
        _mul(g, f, tmp)
        g[0] = tmp[0]; g[1] = tmp[1]; g[2] = tmp[2]; g[3] = tmp[3]
        den = g[2] * g[2] + g[3] * g[3]
        chain.append(((g[0] * g[2] + g[1] * g[3]) / den, 1.0 / den))
        _r_matrix(M_PI - th[(i + 1) % n], f)
        _mul(g, f, tmp)
        g[0] = tmp[0]; g[1] = tmp[1]; g[2] = tmp[2]; g[3] = tmp[3]
    return chain, (g[0], g[1], g[2], g[3])


def closing_system(thetas, lengths, int i0, int i1, int i2):
    """Closing residual and its Jacobian in the solved log-lengths."""
    cdef double th[MAX_N]
    cdef double le[MAX_N]
    cdef int n = _load(thetas, lengths, th, le)
    cdef int m = 2 * n
    cdef double fs[2 * MAX_N][4]
    cdef double prefix[2 * MAX_N + 1][4]
    cdef double suffix[2 * MAX_N + 1][4]
    cdef double dd[4]
    cdef double td[4]
    cdef double tmp[4]
    cdef int i, k
    for i in range(n):
        _t_matrix(le[i], fs[2 * i])
        _r_matrix(M_PI - th[(i + 1) % n], fs[2 * i + 1])
    prefix[0][0] = 1.0; prefix[0][1] = 0.0; prefix[0][2] = 0.0; prefix[0][3] = 1.0
    for k in range(m):
        _mul(prefix[k], fs[k], prefix[k + 1])
    suffix[m][0] = 1.0; suffix[m][1] = 0.0; suffix[m][2] = 0.0; suffix[m][3] = 1.0
    for k in range(m - 1, -1, -1):
        _mul(fs[k], suffix[k + 1], suffix[k])
    cdef double* d = prefix[m]
    cdef double s = 1.0 if d[0] + d[3] >= 0.0 else -1.0
    res = (s * d[1], s * d[2], s * (d[0] - d[3]))
    cdef double jac[3][3]
    cdef int idx[3]
    idx[0] = i0; idx[1] = i1; idx[2] = i2
    for k in range(3):
        i = idx[k]
        _t_dot(le[i], td)
        _mul(prefix[2 * i], td, tmp)
        _mul(tmp, suffix[2 * i + 1], dd)
        jac[0][k] = s * dd[1] * le[i]
        jac[1][k] = s * dd[2] * le[i]
        jac[2][k] = s * (dd[0] - dd[3]) * le[i]
    return res, (
        jac[0][0], jac[0][1], jac[0][2],
        jac[1][0], jac[1][1], jac[1][2],
        jac[2][0], jac[2][1], jac[2][2],
    )
