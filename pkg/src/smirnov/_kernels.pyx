# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel sums over a uniform circle grid.

Each routine mirrors a function in ``_kernels_py`` and must agree with it to
rounding; the test suite checks both backends against each other.
"""

import numpy as np

from libc.math cimport atan2, log, sqrt, M_PI


def trapezoid_sums(const double complex[:] g, const double complex[:] z):
    """Return (P, Q) with P[k] = mean_j Re K_j(z_k) g_j and Q likewise for Im K.

    K_j(z) = (zeta_j + z)/(zeta_j - z) is the Herglotz kernel at node j.
    """
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t j, k
    cdef double h = 2.0 * M_PI / n
    cdef double complex accp, accq
    cdef double zr, zi, cr, ci, dr, di, den, pr, qr
    cdef double[:] cs = np.cos(h * np.arange(n))
    cdef double[:] sn = np.sin(h * np.arange(n))
    out_p = np.empty(m, dtype=np.complex128)
    out_q = np.empty(m, dtype=np.complex128)
    cdef double complex[:] op = out_p
    cdef double complex[:] oq = out_q
    for k in range(m):
        zr = z[k].real
        zi = z[k].imag
        accp = 0
        accq = 0
        for j in range(n):
            cr = cs[j]
            ci = sn[j]
            # (zeta + z)/(zeta - z) = (zeta + z) * conj(zeta - z) / |zeta - z|^2
            dr = cr - zr
            di = ci - zi
            den = dr * dr + di * di
            pr = ((cr + zr) * dr + (ci + zi) * di) / den
            qr = ((ci + zi) * dr - (cr + zr) * di) / den
            accp = accp + pr * g[j]
            accq = accq + qr * g[j]
        op[k] = accp / n
        oq[k] = accq / n
    return out_p, out_q


def step_sums(const double complex[:] g, const double complex[:] z):
    """Exact Poisson/conjugate-Poisson integrals of a cellwise-constant function.

    Cell j is [theta_j, theta_{j+1}); its Herglotz weight is
    -h/(2 pi) + Log((zeta_{j+1} - z)/(zeta_j - z)) / (pi i).
    """
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t j, k, jn
    cdef double h = 2.0 * M_PI / n
    cdef double zr, zi, ar, ai, br, bi, re, im, wp, wq
    cdef double complex accp, accq
    cdef double[:] cs = np.cos(h * np.arange(n))
    cdef double[:] sn = np.sin(h * np.arange(n))
    out_p = np.empty(m, dtype=np.complex128)
    out_q = np.empty(m, dtype=np.complex128)
    cdef double complex[:] op = out_p
    cdef double complex[:] oq = out_q
    for k in range(m):
        zr = z[k].real
        zi = z[k].imag
        accp = 0
        accq = 0
        for j in range(n):
            jn = j + 1
            if jn == n:
                jn = 0
            ar = cs[j] - zr
            ai = sn[j] - zi
            br = cs[jn] - zr
            bi = sn[jn] - zi
            # b * conj(a)
            re = br * ar + bi * ai
            im = bi * ar - br * ai
            wp = (atan2(im, re) - 0.5 * h) / M_PI
            wq = -0.5 * log((br * br + bi * bi) / (ar * ar + ai * ai)) / M_PI
            accp = accp + wp * g[j]
            accq = accq + wq * g[j]
        op[k] = accp
        oq[k] = accq
    return out_p, out_q


def blaschke_product(const double complex[:] zeros, const double complex[:] z):
    """Product over a of (|a|/a)(a - z)/(1 - conj(a) z); a = 0 contributes z."""
    cdef Py_ssize_t nz = zeros.shape[0]
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t j, k
    cdef double zr, zi, ar, ai, ur, ui, nr, ni, dr, di, tr, ti, den, pr, pi_, absa
    # |a|/a = conj(a)/|a|, precomputed per zero
    cdef double[:] uar = np.empty(nz)
    cdef double[:] uai = np.empty(nz)
    for j in range(nz):
        ar = zeros[j].real
        ai = zeros[j].imag
        absa = sqrt(ar * ar + ai * ai)
        if absa == 0:
            uar[j] = 0
            uai[j] = 0
        else:
            uar[j] = ar / absa
            uai[j] = -ai / absa
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[:] o = out
    for k in range(m):
        zr = z[k].real
        zi = z[k].imag
        pr = 1.0
        pi_ = 0.0
        for j in range(nz):
            ar = zeros[j].real
            ai = zeros[j].imag
            if ar == 0 and ai == 0:
                nr, ni = zr, zi
            else:
                ur = uar[j]
                ui = uai[j]
                # u (a - z)
                tr = ar - zr
                ti = ai - zi
                nr = ur * tr - ui * ti
                ni = ur * ti + ui * tr
                # 1 - conj(a) z, then divide
                dr = 1.0 - (ar * zr + ai * zi)
                di = -(ar * zi - ai * zr)
                den = dr * dr + di * di
                tr = (nr * dr + ni * di) / den
                ni = (ni * dr - nr * di) / den
                nr = tr
            tr = pr * nr - pi_ * ni
            pi_ = pr * ni + pi_ * nr
            pr = tr
        o[k] = pr + 1j * pi_
    return out
