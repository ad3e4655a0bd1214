import numpy as np
import pytest

from opuclab.algebra import LaurentSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_series(rng, lo=-6, hi=6, scale=1.0):
    """Random finitely supported series over [lo, hi]."""
    n = hi - lo + 1
    data = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return LaurentSeries(data, lo)


def random_positive_trig_poly(rng, degree=5):
    """Random strictly positive Hermitian trig polynomial as a LaurentSeries.

    w(theta) = c_0 + 2 Re sum t_k e^{ik theta} with c_0 = 2 sum |t_k| + 1,
    so min w >= 1 by the triangle inequality.
    """
    t = rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
    t *= 0.5
    c0 = 2.0 * float(np.sum(np.abs(t))) + 1.0
    coeffs = np.concatenate([np.conj(t[::-1]), [c0], t])
    return LaurentSeries(coeffs, -degree)


def random_squared_modulus_trig_poly(rng, degree=3, max_root=0.5):
    """w = |q(e^{i theta})|^2 for a random q with roots of modulus <= max_root.

    Keeps every singularity of log w at distance >= 1/max_root from the
    circle, so scattering truncations converge geometrically at a known rate.
    """
    roots = max_root * rng.uniform(0.2, 1.0, degree) * \
        np.exp(2j * np.pi * rng.uniform(size=degree))
    q = np.array([1.0 + 0j])
    for r in roots:
        q = np.convolve(q, [1.0, -r])
    series = np.convolve(q, np.conj(q[::-1]))
    return LaurentSeries(series, -degree)
