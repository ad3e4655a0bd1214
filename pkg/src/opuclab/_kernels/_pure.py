"""Numpy implementations of the hot inner loops.

Same contracts as the compiled module `_fast`; selected as the fallback
backend when the extension is not built.
"""

import numpy as np


def levinson(moments, count, guard=1e-10):
    """Monic Szego/Levinson recursion driven by trigonometric moments.

    Parameters
    ----------
    moments : complex array, m_0 .. m_N with N >= count
    count : number of reflection coefficients to produce
    guard : degeneracy guard; the recursion stops when |alpha| >= 1 - guard

    Returns
    -------
    (alpha, energy, bad) where alpha has length `count`, energy[k] is the
    squared norm of the monic polynomial of degree k (length count + 1), and
    bad is the step index at which the guard fired, or -1 on success.  On a
    guard hit the tail of alpha/energy is unspecified.
    """
    m = np.asarray(moments, dtype=np.complex128)
    mc = np.conj(m)
    alpha = np.zeros(count, dtype=np.complex128)
    energy = np.zeros(count + 1, dtype=np.float64)
    phi = np.zeros(count + 1, dtype=np.complex128)  # monic coeffs, ascending
    phi[0] = 1.0
    e = m[0].real
    energy[0] = e
    for n in range(count):
        a_bar = np.dot(phi[: n + 1], mc[1 : n + 2]) / e
        a = np.conj(a_bar)
        if abs(a) >= 1.0 - guard:
            alpha[n] = a  # record the offending value for diagnostics
            return alpha, energy, n
        alpha[n] = a
        star = np.conj(phi[n::-1])  # reversed polynomial of degree n
        head = phi[: n + 1].copy()
        phi[1 : n + 2] = head
        phi[0] = 0.0
        phi[: n + 1] -= a_bar * star
        e *= 1.0 - (a.real * a.real + a.imag * a.imag)
        energy[n + 1] = e
    return alpha, energy, -1


def convolve_direct(a, b):
    """Direct O(len(a)*len(b)) convolution of complex coefficient arrays."""
    return np.convolve(np.asarray(a, dtype=np.complex128),
                       np.asarray(b, dtype=np.complex128))


def exp_series(f, n_out):
    """Power-series exponential: coefficients g_0..g_n_out of exp(f).

    f is a dense coefficient array f[0..deg] with f[0] == 0; the recursion is
    g_0 = 1, n g_n = sum_{k=1}^{min(n,deg)} k f_k g_{n-k}.
    """
    f = np.asarray(f, dtype=np.complex128)
    kf = np.arange(f.size) * f
    g = np.zeros(n_out + 1, dtype=np.complex128)
    g[0] = 1.0
    deg = f.size - 1
    for n in range(1, n_out + 1):
        kmax = min(n, deg)
        if kmax >= 1:
            stop = n - kmax - 1
            tail = g[n - 1 :: -1] if stop < 0 else g[n - 1 : stop : -1]
            g[n] = np.dot(kf[1 : kmax + 1], tail) / n
    return g
