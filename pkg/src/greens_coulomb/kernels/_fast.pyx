# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same API and same formulas as _ref."""

from libc.math cimport atan2, cos, exp, expm1, sin, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double PI = 3.141592653589793
cdef double TWO_OVER_PI = 2.0 / PI
cdef double SQRT2 = 1.4142135623730951


cdef inline double _bracket(double lam, double F, double D) nogil:
    if lam > 0.0:
        return (1.0 + TWO_OVER_PI * atan2(F, D)) / D
    if D <= 0.0:
        return TWO_OVER_PI / F
    return TWO_OVER_PI * atan2(D, F) / D


def hole_greens(double rho, double phi, double z, double rhop, double phip,
                double zp, double R):
    """Aperture-plate Green's function; see kernels._ref.hole_greens."""
    cdef double R2 = R * R
    cdef double s = rho * rho + z * z - R2
    cdef double sp = rhop * rhop + zp * zp - R2
    cdef double A = sqrt(s * s + 4.0 * R2 * z * z)
    cdef double Ap = sqrt(sp * sp + 4.0 * R2 * zp * zp)
    cdef double cross = 4.0 * R2 * z * zp
    cdef double braces_p = s * sp - cross + A * Ap
    cdef double braces_m = s * sp + cross + A * Ap
    cdef double Fp, Fm, perp2, Dm, Dp, lm, lp, t, u, g
    Fp = sqrt(braces_p if braces_p > 0.0 else 0.0) / (SQRT2 * R)
    Fm = sqrt(braces_m if braces_m > 0.0 else 0.0) / (SQRT2 * R)

    perp2 = rho * rho + rhop * rhop - 2.0 * rho * rhop * cos(phi - phip)
    if perp2 < 0.0:
        perp2 = 0.0
    Dm = sqrt(perp2 + (z - zp) * (z - zp))
    Dp = sqrt(perp2 + (z + zp) * (z + zp))

    if zp >= 0.0:
        lm = 1.0
        t = zp * s + z * sp
        lp = 1.0 if t > 0.0 else -1.0
    else:
        lp = -1.0
        u = zp * s - z * sp
        lm = 1.0 if u > 0.0 else -1.0

    g = (_bracket(lm, Fm, Dm) - _bracket(lp, Fp, Dp)) / (8.0 * PI)
    return g, Fm, Fp, Dm, Dp, lm, lp


cdef inline double _one_minus_r_exp(double r, double x) nogil:
    return (1.0 - r) - r * expm1(-x)


def cavity_integrand(cnp.ndarray k_in, double a_free, double a1, double a3,
                     double d, double r1, double r3):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] k = np.ascontiguousarray(k_in, dtype=np.float64)
    cdef Py_ssize_t n = k.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double kk, num, den
    for i in range(n):
        kk = k[i]
        num = _one_minus_r_exp(r1, kk * a1) * _one_minus_r_exp(r3, kk * a3)
        den = _one_minus_r_exp(r1 * r3, 2.0 * d * kk)
        out[i] = exp(-kk * a_free) * num / den
    return out


def cavity_scatter_integrand(cnp.ndarray k_in, double a1, double a3, double d,
                             double r1, double r3):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] k = np.ascontiguousarray(k_in, dtype=np.float64)
    cdef Py_ssize_t n = k.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double kk, e1, e3, ed, num, den
    for i in range(n):
        kk = k[i]
        e1 = exp(-kk * a1)
        e3 = exp(-kk * a3)
        ed = exp(-2.0 * d * kk)
        den = _one_minus_r_exp(r1 * r3, 2.0 * d * kk)
        num = -r1 * e1 - r3 * e3 + r1 * r3 * (e1 * e3 + ed)
        out[i] = num / den
    return out


def screening_integrand(cnp.ndarray k_in, double r, double eps_b, double w):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] k = np.ascontiguousarray(k_in, dtype=np.float64)
    cdef Py_ssize_t n = k.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double kk
    for i in range(n):
        kk = k[i]
        out[i] = kk / (r * (eps_b * kk * kk + w))
    return out


def alpha_chain_sum(cnp.ndarray pts_in, cnp.ndarray w_in, cnp.ndarray r_in,
                    cnp.ndarray rp_in, cnp.ndarray alpha_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.ascontiguousarray(r_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rp = np.ascontiguousarray(rp_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] al = np.ascontiguousarray(alpha_in, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef double s1x, s1y, s1z, s2x, s2y, s2z, n1, n2, quad
    cdef double a00 = al[0, 0], a01 = al[0, 1], a02 = al[0, 2]
    cdef double a10 = al[1, 0], a11 = al[1, 1], a12 = al[1, 2]
    cdef double a20 = al[2, 0], a21 = al[2, 1], a22 = al[2, 2]
    for i in range(n):
        s1x = r[0] - pts[i, 0]
        s1y = r[1] - pts[i, 1]
        s1z = r[2] - pts[i, 2]
        s2x = rp[0] - pts[i, 0]
        s2y = rp[1] - pts[i, 1]
        s2z = rp[2] - pts[i, 2]
        n1 = s1x * s1x + s1y * s1y + s1z * s1z
        n2 = s2x * s2x + s2y * s2y + s2z * s2z
        quad = (s1x * (a00 * s2x + a01 * s2y + a02 * s2z)
                + s1y * (a10 * s2x + a11 * s2y + a12 * s2z)
                + s1z * (a20 * s2x + a21 * s2y + a22 * s2z))
        total += w[i] * quad / (n1 * sqrt(n1) * n2 * sqrt(n2))
    return total
