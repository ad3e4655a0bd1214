# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Levinson recursion, direct convolution, series exponential.

Contracts match `_pure`; see that module for parameter documentation.  Inner
dot products run on split real/imaginary accumulators so the C compiler can
vectorize them.
"""

import numpy as np


ctypedef double complex cplx


def levinson(const cplx[::1] moments, Py_ssize_t count, double guard=1e-10):
    alpha_arr = np.zeros(count, dtype=np.complex128)
    energy_arr = np.zeros(count + 1, dtype=np.float64)
    phi_re_arr = np.zeros(count + 1, dtype=np.float64)
    phi_im_arr = np.zeros(count + 1, dtype=np.float64)
    star_re_arr = np.zeros(count + 1, dtype=np.float64)
    star_im_arr = np.zeros(count + 1, dtype=np.float64)
    m_re_arr = np.ascontiguousarray(np.real(moments))
    m_im_arr = np.ascontiguousarray(np.imag(moments))
    cdef cplx[::1] alpha = alpha_arr
    cdef double[::1] energy = energy_arr
    cdef double[::1] pr = phi_re_arr
    cdef double[::1] pi = phi_im_arr
    cdef double[::1] sr = star_re_arr
    cdef double[::1] si = star_im_arr
    cdef double[::1] mr = m_re_arr
    cdef double[::1] mi = m_im_arr
    cdef double e = mr[0]
    cdef double ir, ii, ar, ai, br, bi, mag2
    cdef Py_ssize_t n, j
    pr[0] = 1.0
    energy[0] = e
    for n in range(count):
        # inner = sum_j phi_j * conj(m_{j+1})
        ir = 0.0
        ii = 0.0
        for j in range(n + 1):
            ir = ir + pr[j] * mr[j + 1] + pi[j] * mi[j + 1]
            ii = ii + pi[j] * mr[j + 1] - pr[j] * mi[j + 1]
        br = ir / e          # a_bar = inner / e
        bi = ii / e
        ar = br              # a = conj(a_bar)
        ai = -bi
        mag2 = ar * ar + ai * ai
        if mag2 >= (1.0 - guard) * (1.0 - guard):
            alpha[n] = ar + 1j * ai  # record the offending value for diagnostics
            return alpha_arr, energy_arr, n
        alpha[n] = ar + 1j * ai
        # star_j = conj(phi_{n-j}), snapshot before phi is overwritten
        for j in range(n + 1):
            sr[j] = pr[n - j]
            si[j] = -pi[n - j]
        # phi <- shift(phi) - a_bar * star
        for j in range(n + 1, 0, -1):
            pr[j] = pr[j - 1]
            pi[j] = pi[j - 1]
        pr[0] = 0.0
        pi[0] = 0.0
        for j in range(n + 1):
            pr[j] = pr[j] - (br * sr[j] - bi * si[j])
            pi[j] = pi[j] - (br * si[j] + bi * sr[j])
        e = e * (1.0 - mag2)
        energy[n + 1] = e
    return alpha_arr, energy_arr, -1


def convolve_direct(const cplx[::1] a, const cplx[::1] b):
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0]
    out_arr = np.zeros(la + lb - 1, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef cplx ai
    for i in range(la):
        ai = a[i]
        for j in range(lb):
            out[i + j] = out[i + j] + ai * b[j]
    return out_arr


def exp_series(const cplx[::1] f, Py_ssize_t n_out):
    g_re_arr = np.zeros(n_out + 1, dtype=np.float64)
    g_im_arr = np.zeros(n_out + 1, dtype=np.float64)
    cdef Py_ssize_t deg = f.shape[0] - 1
    kf_re_arr = np.zeros(deg + 1, dtype=np.float64)
    kf_im_arr = np.zeros(deg + 1, dtype=np.float64)
    cdef double[::1] gr = g_re_arr
    cdef double[::1] gi = g_im_arr
    cdef double[::1] kr = kf_re_arr
    cdef double[::1] ki = kf_im_arr
    cdef Py_ssize_t n, k, kmax
    cdef double ar, ai
    for k in range(deg + 1):
        kr[k] = k * f[k].real
        ki[k] = k * f[k].imag
    gr[0] = 1.0
    for n in range(1, n_out + 1):
        kmax = n if n < deg else deg
        ar = 0.0
        ai = 0.0
        for k in range(1, kmax + 1):
            ar = ar + kr[k] * gr[n - k] - ki[k] * gi[n - k]
            ai = ai + kr[k] * gi[n - k] + ki[k] * gr[n - k]
        gr[n] = ar / n
        gi[n] = ai / n
    return g_re_arr + 1j * g_im_arr
