"""Numpy implementations of the grid kernel sums (fallback backend).

Signatures and results match the compiled ``_kernels`` module.
"""

import numpy as np

# Evaluation points are processed in blocks so the (block, n) work arrays stay
# around a few megabytes.
_BLOCK_ELEMENTS = 1 << 20


def _nodes(n):
    h = 2.0 * np.pi / n
    t = h * np.arange(n)
    return np.cos(t) + 1j * np.sin(t), h


def _blocks(m, n):
    step = max(1, _BLOCK_ELEMENTS // max(n, 1))
    for start in range(0, m, step):
        yield slice(start, min(m, start + step))


def trapezoid_sums(g, z):
    g = np.asarray(g, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    n = g.shape[0]
    zeta, _ = _nodes(n)
    out_p = np.empty(z.shape[0], dtype=np.complex128)
    out_q = np.empty(z.shape[0], dtype=np.complex128)
    for sl in _blocks(z.shape[0], n):
        kern = (zeta[None, :] + z[sl, None]) / (zeta[None, :] - z[sl, None])
        out_p[sl] = (kern.real @ g) / n
        out_q[sl] = (kern.imag @ g) / n
    return out_p, out_q


def step_sums(g, z):
    g = np.asarray(g, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    n = g.shape[0]
    zeta, h = _nodes(n)
    nxt = np.roll(zeta, -1)
    out_p = np.empty(z.shape[0], dtype=np.complex128)
    out_q = np.empty(z.shape[0], dtype=np.complex128)
    for sl in _blocks(z.shape[0], n):
        a = zeta[None, :] - z[sl, None]
        b = nxt[None, :] - z[sl, None]
        ratio = b * np.conj(a)
        wp = (np.angle(ratio) - 0.5 * h) / np.pi
        wq = -0.5 * np.log((b.real**2 + b.imag**2) / (a.real**2 + a.imag**2)) / np.pi
        out_p[sl] = wp @ g
        out_q[sl] = wq @ g
    return out_p, out_q


def blaschke_product(zeros, z):
    zeros = np.asarray(zeros, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    acc = np.ones(z.shape[0], dtype=np.complex128)
    for a in zeros:
        if a == 0:
            acc *= z
        else:
            acc *= (abs(a) / a) * (a - z) / (1 - np.conj(a) * z)
    return acc
