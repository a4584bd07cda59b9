"""Pure-Python reference implementation of the developing kernels.

Mirrors ``_fast.pyx`` operation for operation; kept dependency-free so
the package works without a compiler.  The chain starts at (0, 1)
heading along the unit-speed geodesic with initial tangent (1, 0); each
step translates by the edge length, then turns left by the exterior
angle pi - theta at the next vertex.
"""

import math

_MAX_N = 64


def _t_matrix(length):
    ch, sh = math.cosh(length / 2.0), math.sinh(length / 2.0)
    return (ch, sh, sh, ch)


def _t_dot(length):
    # derivative of the translation factor with respect to length
    ch, sh = math.cosh(length / 2.0) / 2.0, math.sinh(length / 2.0) / 2.0
    return (sh, ch, ch, sh)


def _r_matrix(phi):
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return (c, s, -s, c)


def _mul(m, k):
    return (
        m[0] * k[0] + m[1] * k[2],
        m[0] * k[1] + m[1] * k[3],
        m[2] * k[0] + m[3] * k[2],
        m[2] * k[1] + m[3] * k[3],
    )


def _apply_to_i(m):
    # image of the base point i under the Moebius map (det assumed 1)
    a, b, c, d = m
    den = c * c + d * d
    return ((a * c + b * d) / den, 1.0 / den)


def _factors(thetas, lengths):
    n = len(thetas)
    fs = []
    for i in range(n):
        fs.append(_t_matrix(lengths[i]))
        fs.append(_r_matrix(math.pi - thetas[(i + 1) % n]))
    return fs


def develop_chain(thetas, lengths):
    """Develop the side chain; return (points, raw defect matrix)."""
    n = len(thetas)
    if n != len(lengths):
        raise ValueError("angle/length count mismatch")
    if n > _MAX_N:
        raise ValueError(f"polygon too large (n > {_MAX_N})")
    g = (1.0, 0.0, 0.0, 1.0)
    chain = [(0.0, 1.0)]
    for i in range(n):
        g = _mul(g, _t_matrix(lengths[i]))
        chain.append(_apply_to_i(g))
        g = _mul(g, _r_matrix(math.pi - thetas[(i + 1) % n]))
    return chain, g


def closing_system(thetas, lengths, i0, i1, i2):
    """Closing residual and its Jacobian in the solved log-lengths."""
    n = len(thetas)
    if n != len(lengths):
        raise ValueError("angle/length count mismatch")
    if n > _MAX_N:
        raise ValueError(f"polygon too large (n > {_MAX_N})")
    fs = _factors(thetas, lengths)
    m = 2 * n
    prefix = [(1.0, 0.0, 0.0, 1.0)]
    for k in range(m):
        prefix.append(_mul(prefix[k], fs[k]))
    suffix = [None] * (m + 1)
    suffix[m] = (1.0, 0.0, 0.0, 1.0)
    for k in range(m - 1, -1, -1):
        suffix[k] = _mul(fs[k], suffix[k + 1])
    d = prefix[m]
    s = 1.0 if d[0] + d[3] >= 0.0 else -1.0
    res = (s * d[1], s * d[2], s * (d[0] - d[3]))
    jac = []
    for i in (i0, i1, i2):
        dd = _mul(_mul(prefix[2 * i], _t_dot(lengths[i])), suffix[2 * i + 1])
        jac.append(
            (
                s * dd[1] * lengths[i],
                s * dd[2] * lengths[i],
                s * (dd[0] - dd[3]) * lengths[i],
            )
        )
    # transpose: rows are residual components, columns the solved lengths
    return res, (
        jac[0][0], jac[1][0], jac[2][0],
        jac[0][1], jac[1][1], jac[2][1],
        jac[0][2], jac[1][2], jac[2][2],
    )
