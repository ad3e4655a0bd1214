"""Weight specifications, trigonometric moments, and the Szego machinery.

A WeightSpec describes a strictly positive weight on the unit circle; moments
come from uniform-grid quadrature (an exact discrete Fourier transform on the
grid), Verblunsky coefficients from the Levinson recursion on monic
polynomials, and an independent dense Toeplitz solve serves as the
verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .algebra import LaurentSeries, evaluate_on_circle
from .errors import (DegenerateMomentsError, OracleUnreliableError,
                     QuadratureError, WeightSpecError)

_VARIANTS = ("trig_poly", "rational", "product", "samples")

MAX_QUADRATURE = 1 << 20
ORACLE_MAX_DEGREE = 64
ORACLE_COND_LIMIT = 1e12
DEGENERACY_GUARD = 1e-10


def _coeff_array(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 1 or arr.size == 0:
        raise WeightSpecError("polynomial coefficients must be a nonempty 1-d array")
    return arr


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Symbolic description of a circle weight w(theta).

    variants:
      trig_poly -- Hermitian Laurent series, w = sum w_k e^{ik theta}
      rational  -- w = |q(e^{i theta})|^2 / |p(e^{i theta})|^2, coefficient
                   arrays lowest degree first
      product   -- pointwise product of factor specs
      samples   -- values on the uniform grid theta_j = 2 pi j / M

    With normalize=True the samples are rescaled so that the zeroth moment
    is 1 (Verblunsky coefficients are invariant under this).
    """

    variant: str
    series: LaurentSeries | None = None
    num: np.ndarray | None = None
    den: np.ndarray | None = None
    factors: tuple["WeightSpec", ...] | None = None
    values: np.ndarray | None = None
    normalize: bool = False

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise WeightSpecError(f"unknown weight variant {self.variant!r}")

    @classmethod
    def trig_poly(cls, series: LaurentSeries, normalize: bool = False) -> "WeightSpec":
        return cls(variant="trig_poly", series=series, normalize=normalize)

    @classmethod
    def rational(cls, num, den=(1.0,), normalize: bool = False) -> "WeightSpec":
        return cls(variant="rational", num=_coeff_array(num),
                   den=_coeff_array(den), normalize=normalize)

    @classmethod
    def product(cls, *specs: "WeightSpec", normalize: bool = False) -> "WeightSpec":
        if not specs:
            raise WeightSpecError("product needs at least one factor")
        return cls(variant="product", factors=tuple(specs), normalize=normalize)

    @classmethod
    def from_samples(cls, values, normalize: bool = False) -> "WeightSpec":
        arr = np.asarray(values, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2:
            raise WeightSpecError("samples must be a 1-d array of length >= 2")
        return cls(variant="samples", values=arr, normalize=normalize)

    def scaled(self, factor: float) -> "WeightSpec":
        """The spec for factor * w (a constant rational multiplier)."""
        return WeightSpec.product(
            self, WeightSpec.rational([math.sqrt(factor)]),
            normalize=self.normalize)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"variant": self.variant}
        if self.normalize:
            d["normalize"] = True
        if self.variant == "trig_poly":
            d["series"] = self.series.to_dict()
        elif self.variant == "rational":
            d["num"] = [[float(c.real), float(c.imag)] for c in self.num]
            d["den"] = [[float(c.real), float(c.imag)] for c in self.den]
        elif self.variant == "product":
            d["factors"] = [f.to_dict() for f in self.factors]
        else:
            d["values"] = [float(np.real(v)) for v in self.values]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WeightSpec":
        variant = d.get("variant")
        normalize = bool(d.get("normalize", False))
        if variant == "trig_poly":
            return cls.trig_poly(LaurentSeries.from_dict(d["series"]), normalize)
        if variant == "rational":
            return cls.rational(_parse_poly(d["num"]), _parse_poly(d.get("den", [1.0])),
                                normalize)
        if variant == "product":
            return cls.product(*(cls.from_dict(f) for f in d["factors"]),
                               normalize=normalize)
        if variant == "samples":
            return cls.from_samples(d["values"], normalize)
        raise WeightSpecError(f"unknown weight variant {variant!r}")


def _parse_poly(entries) -> np.ndarray:
    """Coefficient list, each entry a number or an [re, im] pair."""
    out = []
    for e in entries:
        if isinstance(e, (list, tuple)):
            if len(e) != 2:
                raise WeightSpecError(f"complex coefficient must be [re, im], got {e!r}")
            out.append(complex(e[0], e[1]))
        else:
            out.append(complex(e))
    return np.asarray(out, dtype=np.complex128)


def _trig_resample(v: np.ndarray, m: int) -> np.ndarray:
    """Trigonometric resampling of grid values onto an m-point grid."""
    m0 = v.size
    if m == m0:
        return v.copy()
    if m < m0:
        if m0 % m == 0:
            return v[:: m0 // m].copy()
        raise WeightSpecError(
            f"cannot downsample {m0} stored samples onto a {m}-point grid")
    spectrum = np.fft.fft(v)
    out = np.zeros(m, dtype=np.complex128)
    half = m0 // 2
    if m0 % 2 == 0:
        out[:half] = spectrum[:half]
        out[half] = 0.5 * spectrum[half]
        out[m - half] = 0.5 * spectrum[half]
        out[m - half + 1 :] = spectrum[half + 1 :]
    else:
        out[: half + 1] = spectrum[: half + 1]
        out[m - half :] = spectrum[half + 1 :]
    return np.fft.ifft(out) * (m / m0)


def _raw_samples(spec: WeightSpec, m: int) -> np.ndarray:
    if spec.variant == "trig_poly":
        return evaluate_on_circle(spec.series, m)
    if spec.variant == "rational":
        qv = evaluate_on_circle(LaurentSeries(spec.num, 0), m)
        pv = evaluate_on_circle(LaurentSeries(spec.den, 0), m)
        return (np.abs(qv) ** 2 / np.abs(pv) ** 2).astype(np.complex128)
    if spec.variant == "product":
        out = np.ones(m, dtype=np.complex128)
        for f in spec.factors:
            out *= _raw_samples(f, m)
        return out
    return _trig_resample(spec.values, m)


def sample_grid(spec: WeightSpec, m: int) -> np.ndarray:
    """w(theta_j) on the uniform m-point grid, validated real and positive."""
    vals = _raw_samples(spec, m)
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        raise WeightSpecError("weight vanishes identically on the grid")
    if float(np.max(np.abs(vals.imag))) > 1e-12 * scale:
        raise WeightSpecError("weight is not real on the grid")
    w = vals.real.copy()
    j = int(np.argmin(w))
    if w[j] <= 0.0:
        raise WeightSpecError(
            f"weight not strictly positive on the grid: w(theta_{j}) = "
            f"{w[j]:.6g} at theta = 2*pi*{j}/{m}")
    if spec.normalize:
        w /= w.mean()
    return w


@dataclass(frozen=True)
class MomentTable:
    """One-sided trigonometric moments m_0..m_N with quadrature metadata.

    m_n = (1/2pi) int e^{-in theta} w(theta) dtheta; the negative side is
    implicit by Hermitian symmetry m_{-n} = conj(m_n).
    """

    m: np.ndarray
    quadrature: int
    aliasing: float
    normalized: bool = False

    def __post_init__(self):
        arr = np.asarray(self.m, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)
        if not (arr[0].real > 0 and abs(arr[0].imag) <= 1e-12 * arr[0].real):
            raise WeightSpecError("zeroth moment must be real and positive")

    @property
    def n_max(self) -> int:
        return self.m.size - 1

    def moment(self, n: int) -> complex:
        """Two-sided access via Hermitian symmetry."""
        if abs(n) > self.n_max:
            raise IndexError(f"moment index {n} outside table")
        return complex(self.m[n]) if n >= 0 else complex(np.conj(self.m[-n]))

    def to_dict(self) -> dict:
        return {
            "re": [float(x) for x in self.m.real],
            "im": [float(x) for x in self.m.imag],
            "meta": {"N": self.n_max, "M": self.quadrature,
                     "aliasing_estimate": self.aliasing,
                     "normalized": self.normalized},
        }


def compute_moments(spec: WeightSpec, n_max: int, quadrature: int) -> MomentTable:
    """Moments by M-point uniform quadrature (exact DFT on the grid).

    Requires quadrature >= 8 (n_max + 1) and a power of two; the aliasing
    estimate is the largest coefficient magnitude in the Nyquist band.
    """
    m_pts = int(quadrature)
    if m_pts < 8 * (n_max + 1):
        raise QuadratureError(
            f"quadrature {m_pts} too small: need at least {8 * (n_max + 1)}")
    if m_pts & (m_pts - 1):
        raise QuadratureError(f"quadrature {m_pts} is not a power of two")
    w = sample_grid(spec, m_pts)
    raw = np.fft.rfft(w) / m_pts
    aliasing = float(np.max(np.abs(raw[-(n_max + 2) :])))
    return MomentTable(m=raw[: n_max + 1].copy(), quadrature=m_pts,
                       aliasing=aliasing, normalized=spec.normalize)


def auto_quadrature(spec: WeightSpec, n_max: int, tol: float = 1e-12,
                    cap: int = MAX_QUADRATURE) -> MomentTable:
    """Double the grid until successive moment tables agree to tol (or cap)."""
    m_pts = 1 << max(8 * (n_max + 1) - 1, 1).bit_length()
    prev = compute_moments(spec, n_max, m_pts)
    while m_pts < cap:
        m_pts *= 2
        cur = compute_moments(spec, n_max, m_pts)
        if float(np.max(np.abs(cur.m - prev.m))) <= tol:
            return cur
        prev = cur
    return prev


@dataclass(frozen=True)
class VerblunskySequence:
    """alpha_0..alpha_{N-1} with the derived rho_n and kappa_n.

    rho_n = sqrt(1 - |alpha_n|^2) and kappa_n = prod_{i<n} 1/rho_i, so that
    rho_n = kappa_n / kappa_{n+1} holds exactly as computed.
    """

    alpha: np.ndarray
    rho: np.ndarray
    kappa: np.ndarray
    quadrature: int | None = None
    aliasing: float | None = None

    def __post_init__(self):
        for name in ("alpha", "rho", "kappa"):
            arr = getattr(self, name)
            arr = np.asarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.abs(self.alpha) >= 1.0):
            raise ValueError("Verblunsky coefficients must satisfy |alpha_n| < 1")

    def __len__(self) -> int:
        return self.alpha.size

    @classmethod
    def from_alphas(cls, alphas, quadrature=None, aliasing=None) -> "VerblunskySequence":
        alpha = np.asarray(alphas, dtype=np.complex128)
        rho = np.sqrt(1.0 - np.abs(alpha) ** 2)
        kappa = np.ones(alpha.size + 1, dtype=np.float64)
        if alpha.size:
            kappa[1:] = np.cumprod(1.0 / rho)
        return cls(alpha=alpha, rho=rho, kappa=kappa,
                   quadrature=quadrature, aliasing=aliasing)

    def to_dict(self) -> dict:
        return {
            "alpha": {"re": [float(x) for x in self.alpha.real],
                      "im": [float(x) for x in self.alpha.imag]},
            "rho": [float(x) for x in self.rho],
            "kappa": [float(x) for x in self.kappa],
            "meta": {"N": len(self), "M": self.quadrature,
                     "aliasing_estimate": self.aliasing},
        }


def levinson(moments: MomentTable, count: int) -> VerblunskySequence:
    """Verblunsky coefficients via the Levinson recursion on monic polynomials.

    alpha_n = -conj(Phi_{n+1}(0)) where Phi_{n+1} = z Phi_n - conj(alpha_n) Phi_n*;
    raises DegenerateMomentsError when |alpha_n| >= 1 - 1e-10.
    """
    if count > moments.n_max:
        raise ValueError(f"need {count + 1} moments, table has {moments.n_max + 1}")
    alpha, _, bad = _kernels.levinson(np.ascontiguousarray(moments.m),
                                      count, DEGENERACY_GUARD)
    if bad >= 0:
        raise DegenerateMomentsError(step=bad, magnitude=float(np.abs(alpha[bad])))
    return VerblunskySequence.from_alphas(alpha, quadrature=moments.quadrature,
                                          aliasing=moments.aliasing)


def monic_from_alphas(alphas, degree: int) -> np.ndarray:
    """Monic Phi_degree coefficients (ascending) from reflection coefficients."""
    if degree > len(alphas):
        raise ValueError("not enough coefficients for the requested degree")
    phi = np.zeros(degree + 1, dtype=np.complex128)
    phi[0] = 1.0
    for n in range(degree):
        a_bar = np.conj(alphas[n])
        star = np.conj(phi[n::-1])
        head = phi[: n + 1].copy()
        phi[1 : n + 2] = head
        phi[0] = 0.0
        phi[: n + 1] -= a_bar * star
    return phi


@dataclass(frozen=True)
class PolynomialPair:
    """Orthonormal polynomial phi_n and its reversed partner phi_n*."""

    phi: LaurentSeries
    phi_star: LaurentSeries
    degree: int

    def monic_coefficients(self) -> np.ndarray:
        """phi_n / kappa_n, ascending (the leading coefficient is kappa_n)."""
        lead = self.phi.coeffs[-1]
        return self.phi.coeffs / lead


def gram_schmidt_oracle(moments: MomentTable, degree: int) -> PolynomialPair:
    """Independent oracle: monic Phi_n from a dense Toeplitz solve.

    No recursion is involved; raises OracleUnreliableError when the Toeplitz
    condition number exceeds 1e12.  Intended for small degree (<= 64).
    """
    if degree > ORACLE_MAX_DEGREE:
        raise ValueError(f"oracle degree limited to {ORACLE_MAX_DEGREE}")
    if degree > moments.n_max:
        raise ValueError("not enough moments for the requested degree")
    m = moments.m
    if degree == 0:
        monic = np.ones(1, dtype=np.complex128)
    else:
        # <Phi_n, z^k> = 0 for k < n:  sum_j x_j m_{k-j} = -m_{k-n}
        col = m[:degree]
        top = np.conj(m[:degree])
        T = scipy.linalg.toeplitz(col, top)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            cond = float(np.linalg.cond(T))
        if cond > ORACLE_COND_LIMIT:
            raise OracleUnreliableError(
                f"oracle unreliable: Toeplitz condition number {cond:.3g}")
        rhs = -np.conj(m[degree:0:-1])
        x = np.linalg.solve(T, rhs)
        monic = np.concatenate([x, [1.0 + 0j]])
    energy = np.dot(monic, m[degree::-1]).real
    if energy <= 0:
        raise OracleUnreliableError("nonpositive polynomial norm from the solve")
    kappa = 1.0 / math.sqrt(energy)
    phi = LaurentSeries(kappa * monic, 0, tag="plus")
    phi_star = LaurentSeries(kappa * np.conj(monic[::-1]), 0, tag="plus")
    return PolynomialPair(phi=phi, phi_star=phi_star, degree=degree)


def forward_recurrence(seq: VerblunskySequence, degree: int,
                       kappa0: float = 1.0) -> PolynomialPair:
    """Run the Szego recurrence forward from phi_0 = phi_0* = kappa0.

    kappa0 is the degree-zero normalization; the default 1 is the
    probability-measure convention.
    """
    if degree > len(seq):
        raise ValueError("not enough Verblunsky coefficients")
    phi = np.zeros(degree + 1, dtype=np.complex128)
    star = np.zeros(degree + 1, dtype=np.complex128)
    phi[0] = kappa0
    star[0] = kappa0
    for n in range(degree):
        a = seq.alpha[n]
        inv_rho = 1.0 / seq.rho[n]
        shifted = np.concatenate([[0.0], phi[: n + 1]])
        new_phi = (shifted - np.conj(a) * np.concatenate([star[: n + 1], [0.0]]))
        new_star = (np.concatenate([star[: n + 1], [0.0]]) - a * shifted)
        phi[: n + 2] = inv_rho * new_phi
        star[: n + 2] = inv_rho * new_star
    return PolynomialPair(
        phi=LaurentSeries(phi, 0, tag="plus", truncation=degree),
        phi_star=LaurentSeries(star, 0, tag="plus", truncation=degree),
        degree=degree)


def hatted_form(pair: PolynomialPair) -> LaurentSeries:
    """The minus-tagged normalization z^{-n} phi_n used by the rewritten recurrence."""
    return LaurentSeries(pair.phi.coeffs, -pair.degree, tag="minus")


def reconstruct_weight(seq: VerblunskySequence, degree: int, m_pts: int,
                       kappa0: float = 1.0) -> np.ndarray:
    """Grid samples of 1/|phi_n*(e^{i theta_j})|^2 on the m-point grid.

    Converges to the (normalized) weight as the degree grows when the
    coefficients decay.
    """
    pair = forward_recurrence(seq, degree, kappa0)
    vals = evaluate_on_circle(pair.phi_star, m_pts)
    return 1.0 / np.abs(vals) ** 2
