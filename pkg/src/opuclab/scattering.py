"""Szego factors, the scattering function, and the coefficient-prediction map.

From the Fourier coefficients c_n of log w come the interior/exterior Szego
factors f_plus = exp(-c_0/2 - sum_{k>=1} c_k z^k) and f_minus (its
conjugate reflection), the unimodular ratio S = f_minus / f_plus with Laurent
coefficients d_k, and the prediction alpha_n ~ -conj(d_{-n-1}) whose error
decays at roughly the cube of the coefficient rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (LaurentSeries, conj_reflect, convolve, exp_one_sided,
                      evaluate_on_circle)
from .engine import VerblunskySequence, WeightSpec, sample_grid
from .errors import WeightSpecError
from .fitting import DecayFit, decay_rate

# Internal oversampling of the scattering truncation keeps convolution tails
# below 1e-14 for geometrically decaying coefficients.
SCATTERING_OVERSAMPLE = 2


@dataclass(frozen=True)
class LogWeightCoeffs:
    """Fourier coefficients c_{-N}..c_N of log w with realness bookkeeping.

    For a real, strictly positive weight c_0 is real and c_{-n} = conj(c_n);
    both are validated to 1e-12 at construction.
    """

    c: np.ndarray
    n_max: int
    quadrature: int

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.complex128)
        if arr.size != 2 * self.n_max + 1:
            raise ValueError("coefficient array must cover -N..N")
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)
        scale = max(float(np.max(np.abs(arr))), 1.0)
        if abs(self[0].imag) > 1e-12 * scale:
            raise WeightSpecError("c_0 is not real: weight samples not real/positive")
        sym = np.abs(arr[::-1] - np.conj(arr))
        if float(np.max(sym)) > 1e-12 * scale:
            raise WeightSpecError("log-weight coefficients are not Hermitian")

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.n_max:
            return 0j
        return complex(self.c[k + self.n_max])

    @property
    def c0(self) -> float:
        return self[0].real

    def plus_part(self, n_max: int | None = None) -> LaurentSeries:
        """The one-sided series sum_{k=1}^{n_max} c_k z^k."""
        k_top = self.n_max if n_max is None else min(n_max, self.n_max)
        if k_top < 1:
            return LaurentSeries([0.0], 0, tag="plus")
        return LaurentSeries(self.c[self.n_max + 1 : self.n_max + k_top + 1], 1,
                             tag="plus")

    def magnitudes(self) -> np.ndarray:
        """|c_n| for n = 0..N (the symmetric side carries the same values)."""
        return np.abs(self.c[self.n_max :])

    def to_series(self) -> LaurentSeries:
        return LaurentSeries(self.c, -self.n_max, truncation=self.n_max)


def log_weight_coeffs(spec: WeightSpec, n_max: int, quadrature: int) -> LogWeightCoeffs:
    """c_n = (1/2pi) int e^{-in theta} log w(theta) dtheta for |n| <= n_max.

    Pointwise real logarithm of the grid samples followed by a DFT; rejects
    non-positive samples (the real log is undefined there).
    """
    if quadrature < 2 * (n_max + 1):
        raise WeightSpecError(
            f"quadrature {quadrature} cannot resolve coefficients to |n| = {n_max}")
    w = sample_grid(spec, quadrature)  # raises on non-positive samples
    raw = np.fft.fft(np.log(w)) / quadrature
    c = np.empty(2 * n_max + 1, dtype=np.complex128)
    c[n_max:] = raw[: n_max + 1]
    c[:n_max] = raw[-n_max:] if n_max else raw[:0]
    return LogWeightCoeffs(c=c, n_max=n_max, quadrature=quadrature)


def f_plus_series(c: LogWeightCoeffs, n_max: int) -> LaurentSeries:
    """f_plus = exp(-c_0/2 - sum_{k>=1} c_k z^k) truncated at degree n_max."""
    g = exp_one_sided(-1.0 * c.plus_part(n_max), n_max)
    return LaurentSeries(math.exp(-0.5 * c.c0) * g.coeffs, 0, tag="plus",
                         truncation=n_max)


def f_minus_series(c: LogWeightCoeffs, n_max: int) -> LaurentSeries:
    """f_minus = conjugate reflection of f_plus."""
    return conj_reflect(f_plus_series(c, n_max))


def scattering_series(c: LogWeightCoeffs, n_max: int,
                      oversample: int = SCATTERING_OVERSAMPLE) -> LaurentSeries:
    """Laurent coefficients d_k of S = exp(sum_{k>=1} (c_k z^k - conj(c_k) z^-k)).

    Computed as E_plus * E_minus with E_plus = exp(sum c_k z^k) and E_minus
    the conjugate reflection of exp(-sum c_k z^k), each expanded to an
    oversampled degree before truncating to |k| <= n_max.  c_0 cancels.
    """
    depth = max(oversample * n_max, n_max, 1)
    u = c.plus_part()
    e_plus = exp_one_sided(u, depth)
    e_minus = conj_reflect(exp_one_sided(-1.0 * u, depth))
    full = convolve(e_plus, e_minus)
    return full.restricted(-n_max, n_max, truncation=n_max)


@dataclass(frozen=True)
class ScatteringData:
    """f_plus, f_minus and the scattering series at a common truncation."""

    f_plus: LaurentSeries
    f_minus: LaurentSeries
    S: LaurentSeries
    n_max: int
    quadrature: int

    def to_dict(self) -> dict:
        return {
            "f_plus": {**self.f_plus.to_dict(), "role": "f_plus"},
            "f_minus": {**self.f_minus.to_dict(), "role": "f_minus"},
            "S": {**self.S.to_dict(), "role": "S"},
            "meta": {"N": self.n_max, "M": self.quadrature},
        }


def scattering_data(spec: WeightSpec, n_alphas: int, quadrature: int,
                    f_degree: int | None = None) -> ScatteringData:
    """Full scattering pipeline for a weight spec.

    The scattering series is truncated at n_alphas + 1 (enough support for
    predicting n_alphas coefficients); log-weight coefficients are computed
    at twice that depth to keep the truncation tails negligible.
    """
    s_trunc = n_alphas + 1
    depth = 2 * (s_trunc + 1)
    c = log_weight_coeffs(spec, depth, quadrature)
    f_deg = n_alphas if f_degree is None else f_degree
    return ScatteringData(
        f_plus=f_plus_series(c, f_deg),
        f_minus=f_minus_series(c, f_deg),
        S=scattering_series(c, s_trunc),
        n_max=s_trunc,
        quadrature=quadrature)


def predict_alphas(S: LaurentSeries, count: int) -> np.ndarray:
    """alpha~_n = -conj(d_{-n-1}) for n = 0..count-1."""
    d = S.padded(-count, -1)[::-1]  # d_{-1}, d_{-2}, ..., d_{-count}
    return -np.conj(d)


@dataclass(frozen=True)
class ErrorProfile:
    """Fitted decay of |alpha_n| and of the prediction error |e_n|."""

    alpha_fit: DecayFit
    error_fit: DecayFit
    ratio: float | None
    window: tuple[int, int]
    usable_points: int

    def to_dict(self) -> dict:
        return {
            "alpha_slope": self.alpha_fit.slope,
            "error_slope": self.error_fit.slope,
            "ratio": self.ratio,
            "window": list(self.window),
            "usable_points": self.usable_points,
            "alpha_fit": self.alpha_fit.to_dict(),
            "error_fit": self.error_fit.to_dict(),
        }


def error_profile(seq: VerblunskySequence | np.ndarray, alpha_tilde,
                  window: tuple[int, int]) -> ErrorProfile:
    """Least-squares slopes of log|alpha_n| and log|e_n| over the window.

    e_n = conj(alpha_n) + d_{-n-1}, so |e_n| = |alpha_n - alpha~_n|.  Exact
    zeros are excluded from the fits; fewer than four usable error points
    yields the "insufficient" flag, an all-zero error window the
    "identically_zero" sentinel (error slope -inf in spirit: R = inf).
    """
    alpha = seq.alpha if isinstance(seq, VerblunskySequence) else np.asarray(seq)
    tilde = np.asarray(alpha_tilde, dtype=np.complex128)
    n = min(alpha.size, tilde.size)
    err = np.abs(alpha[:n] - tilde[:n])
    alpha_fit = decay_rate(alpha, window)
    error_fit = decay_rate(err, window)
    ratio = None
    if alpha_fit.status == "ok" and error_fit.status == "ok" and alpha_fit.slope != 0:
        ratio = error_fit.slope / alpha_fit.slope
    return ErrorProfile(alpha_fit=alpha_fit, error_fit=error_fit, ratio=ratio,
                        window=(int(window[0]), int(window[1])),
                        usable_points=error_fit.n_used)


def unimodularity_defect(S: LaurentSeries, m_pts: int = 1024) -> float:
    """max_j | |S(e^{i theta_j})| - 1 | on the grid."""
    vals = evaluate_on_circle(S, max(m_pts, 2 * len(S)))
    return float(np.max(np.abs(np.abs(vals) - 1.0)))
