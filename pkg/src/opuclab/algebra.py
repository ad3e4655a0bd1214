"""Weighted sequence spaces and truncated two-sided Laurent series.

A Beurling weight nu defines the norm ||f||_nu = sum_k nu(k) |f_k|; series of
finite norm form a Banach algebra under convolution, with one-sided
subalgebras picked out by the projectors that keep nonnegative (plus) or
nonpositive (minus) indices.  Everything here is immutable and pure, so all
operations are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

_FAMILIES = ("exponential", "poly_exponential")

# Below this coefficient length convolution uses the direct kernel; at or
# above it, FFT multiplication.  Both routes must agree to 1e-10 absolute.
DIRECT_CONVOLUTION_LIMIT = 128


@dataclass(frozen=True)
class BeurlingWeight:
    """Admissible symmetric submultiplicative weight on the integers.

    exponential:       nu(n) = R**|n|
    poly_exponential:  nu(n) = (1 + |n|)**s * R**|n|

    Both families satisfy nu(0) = 1, nu(n) = nu(-n) >= 1 and
    nu(n+m) <= nu(n) nu(m), with nu(n)**(1/n) -> R.  R == 1 gives a strong
    weight.  Only these two closed forms are supported; arbitrary tables are
    rejected so the admissibility invariants hold by construction.
    """

    family: str
    R: float
    s: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown Beurling family {self.family!r}")
        if not self.R >= 1.0:
            raise ValueError("R must be >= 1")
        if self.s < 0.0:
            raise ValueError("s must be >= 0")
        if self.family == "exponential" and self.s != 0.0:
            raise ValueError("exponential family takes no polynomial exponent")

    def __call__(self, n: int) -> float:
        a = abs(n)
        try:
            v = float(self.R) ** a
            if self.family == "poly_exponential":
                v *= (1.0 + a) ** self.s
        except OverflowError:
            return math.inf
        return v

    def values(self, indices) -> np.ndarray:
        """Vectorized nu over an integer array (overflow saturates to inf)."""
        a = np.abs(np.asarray(indices, dtype=np.float64))
        with np.errstate(over="ignore"):
            v = float(self.R) ** a
            if self.family == "poly_exponential":
                v = v * (1.0 + a) ** self.s
        return v

    @property
    def is_strong(self) -> bool:
        return self.R == 1.0

    def to_dict(self) -> dict:
        d = {"family": self.family, "R": self.R}
        if self.family == "poly_exponential":
            d["s"] = self.s
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BeurlingWeight":
        return cls(family=d["family"], R=float(d["R"]), s=float(d.get("s", 0.0)))


class LaurentSeries:
    """Finitely supported two-sided coefficient sequence sum_k f_k z^k.

    Coefficients are stored densely over [lo, hi]; indices outside are
    implicitly zero.  Instances are immutable.  A series tagged "plus" must
    have lo >= 0, one tagged "minus" must have hi <= 0.  `truncation`
    optionally records the truncation degree used at construction.
    """

    __slots__ = ("_coeffs", "_lo", "_tag", "_truncation")

    def __init__(self, coeffs, lo: int = 0, tag: str | None = None,
                 truncation: int | None = None):
        arr = np.array(coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d array")
        lo = int(lo)
        hi = lo + arr.size - 1
        if tag not in (None, "plus", "minus"):
            raise ValueError(f"unknown tag {tag!r}")
        if tag == "plus" and lo < 0:
            raise ValueError("a 'plus' series must have lo >= 0")
        if tag == "minus" and hi > 0:
            raise ValueError("a 'minus' series must have hi <= 0")
        arr.setflags(write=False)
        self._coeffs = arr
        self._lo = lo
        self._tag = tag
        self._truncation = truncation

    # -- construction helpers ------------------------------------------------

    @classmethod
    def delta(cls, value: complex = 1.0) -> "LaurentSeries":
        """The identity element {0: value}."""
        return cls([value], 0)

    @classmethod
    def from_pairs(cls, pairs: dict, tag: str | None = None) -> "LaurentSeries":
        """Build from a sparse {index: coefficient} mapping."""
        if not pairs:
            return cls([0.0], 0, tag=tag)
        lo = min(pairs)
        hi = max(pairs)
        dense = np.zeros(hi - lo + 1, dtype=np.complex128)
        for k, v in pairs.items():
            dense[k - lo] = v
        return cls(dense, lo, tag=tag)

    # -- basic accessors -----------------------------------------------------

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + self._coeffs.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def tag(self) -> str | None:
        return self._tag

    @property
    def truncation(self) -> int | None:
        return self._truncation

    @property
    def one_norm(self) -> float:
        return float(np.sum(np.abs(self._coeffs)))

    def __len__(self) -> int:
        return self._coeffs.size

    def __getitem__(self, k: int) -> complex:
        if self._lo <= k <= self.hi:
            return complex(self._coeffs[k - self._lo])
        return 0j

    def padded(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficients over [lo, hi], zero outside the support."""
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        a = max(lo, self._lo)
        b = min(hi, self.hi)
        if a <= b:
            out[a - lo : b - lo + 1] = self._coeffs[a - self._lo : b - self._lo + 1]
        return out

    def trimmed(self, rel: float = 0.0) -> "LaurentSeries":
        """Strip margins whose magnitude is <= rel * max|coeff| (0 = exact zeros)."""
        mags = np.abs(self._coeffs)
        cutoff = rel * mags.max() if mags.size else 0.0
        keep = np.nonzero(mags > cutoff)[0]
        if keep.size == 0:
            return LaurentSeries([0.0], 0, tag=self._tag,
                                 truncation=self._truncation)
        a, b = keep[0], keep[-1]
        return LaurentSeries(self._coeffs[a : b + 1], self._lo + a,
                             tag=self._tag, truncation=self._truncation)

    def shifted(self, k: int) -> "LaurentSeries":
        """The series z^k * f (index shift by k)."""
        return LaurentSeries(self._coeffs, self._lo + k)

    def restricted(self, lo: int, hi: int, tag: str | None = None,
                   truncation: int | None = None) -> "LaurentSeries":
        """Coefficients restricted to [lo, hi] (zero-filled outside support)."""
        return LaurentSeries(self.padded(lo, hi), lo, tag=tag,
                             truncation=truncation)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo = min(self._lo, other._lo)
        hi = max(self.hi, other.hi)
        return LaurentSeries(self.padded(lo, hi) + other.padded(lo, hi), lo)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo = min(self._lo, other._lo)
        hi = max(self.hi, other.hi)
        return LaurentSeries(self.padded(lo, hi) - other.padded(lo, hi), lo)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(-self._coeffs, self._lo, tag=self._tag)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return convolve(self, other)
        return LaurentSeries(self._coeffs * complex(other), self._lo,
                             tag=self._tag, truncation=self._truncation)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __repr__(self) -> str:
        tag = f", tag={self._tag!r}" if self._tag else ""
        return f"LaurentSeries([{self._lo}..{self.hi}]{tag})"

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "lo": self._lo,
            "hi": self.hi,
            "re": [float(x) for x in self._coeffs.real],
            "im": [float(x) for x in self._coeffs.imag],
        }

    @classmethod
    def from_dict(cls, d: dict, tag: str | None = None) -> "LaurentSeries":
        lo, hi = int(d["lo"]), int(d["hi"])
        re = np.asarray(d["re"], dtype=np.float64)
        im = np.asarray(d["im"], dtype=np.float64)
        if re.size != hi - lo + 1 or im.size != re.size:
            raise ValueError("re/im length does not match [lo, hi]")
        return cls(re + 1j * im, lo, tag=tag)


# -- operations ---------------------------------------------------------------


def nu_eval(weight: BeurlingWeight, n: int) -> float:
    """nu(n) for the given weight family."""
    return weight(n)


def nu_norm(f: LaurentSeries, weight: BeurlingWeight) -> float:
    """||f||_nu = sum nu(k) |f_k|.  Overflow is reported as math.inf."""
    k = np.arange(f.lo, f.hi + 1)
    mags = np.abs(f.coeffs)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = weight.values(k) * mags
    terms[mags == 0.0] = 0.0  # 0 * inf
    total = float(np.sum(terms))
    return total if math.isfinite(total) else math.inf


def _convolve_fft(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.size + y.size - 1
    size = 1 << (n - 1).bit_length()
    return np.fft.ifft(np.fft.fft(x, size) * np.fft.fft(y, size))[:n]


def convolve(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """(a*b)(n) = sum_k a(k) b(n-k); support bounds add."""
    if max(len(a), len(b)) < DIRECT_CONVOLUTION_LIMIT:
        data = _kernels.convolve_direct(np.ascontiguousarray(a.coeffs),
                                        np.ascontiguousarray(b.coeffs))
    else:
        data = _convolve_fft(a.coeffs, b.coeffs)
    tag = a.tag if a.tag == b.tag else None
    return LaurentSeries(data, a.lo + b.lo, tag=tag)


def project_plus(f: LaurentSeries) -> LaurentSeries:
    """Keep indices n >= 0 (index 0 included)."""
    if f.hi < 0:
        return LaurentSeries([0.0], 0, tag="plus")
    lo = max(f.lo, 0)
    return LaurentSeries(f.coeffs[lo - f.lo :], lo, tag="plus")


def project_minus(f: LaurentSeries) -> LaurentSeries:
    """Keep indices n <= 0 (index 0 included)."""
    if f.lo > 0:
        return LaurentSeries([0.0], 0, tag="minus")
    hi = min(f.hi, 0)
    return LaurentSeries(f.coeffs[: hi - f.lo + 1], f.lo, tag="minus")


def conj_reflect(f: LaurentSeries) -> LaurentSeries:
    """g with g_k = conj(f_{-k}); swaps the plus/minus tags."""
    tag = {"plus": "minus", "minus": "plus"}.get(f.tag)
    return LaurentSeries(np.conj(f.coeffs[::-1]), -f.hi, tag=tag,
                         truncation=f.truncation)


def exp_one_sided(f: LaurentSeries, n_out: int) -> LaurentSeries:
    """Coefficients g_0..g_n_out of exp(f) for a plus series with f_0 = 0.

    Uses the power-series recursion g_0 = 1, n g_n = sum_k k f_k g_{n-k};
    exact for polynomial inputs up to the truncation degree.
    """
    if f.lo < 0 and np.any(f.coeffs[: -f.lo] != 0):
        raise ValueError("exp_one_sided requires vanishing coefficients at k < 0")
    if f[0] != 0:
        raise ValueError("exp_one_sided requires a vanishing constant term")
    if n_out < 0:
        raise ValueError("truncation degree must be >= 0")
    dense = f.padded(0, min(f.hi, n_out) if f.hi >= 0 else 0)
    g = _kernels.exp_series(np.ascontiguousarray(dense), n_out)
    return LaurentSeries(g, 0, tag="plus", truncation=n_out)


def evaluate(f: LaurentSeries, z: complex) -> complex:
    """sum f_k z^k by Horner on each side of index 0."""
    z = complex(z)
    c = f.coeffs
    lo, hi = f.lo, f.hi
    if z == 0:
        if lo < 0 and np.any(c[: -lo] != 0):
            raise ZeroDivisionError("z = 0 with negative-index support")
        return f[0]
    pos = 0j
    for k in range(hi, -1, -1):
        pos = pos * z + (c[k - lo] if k >= lo else 0j)
    neg = 0j
    if lo < 0:
        u = 1.0 / z
        for j in range(-lo, 0, -1):  # j = |lo| .. 1, coefficient f_{-j}
            fk = c[-j - lo] if -j <= hi else 0j
            neg = (neg + fk) * u
    return pos + neg


def evaluate_on_circle(f: LaurentSeries, m: int, radius: float = 1.0) -> np.ndarray:
    """Values of f at z = radius * exp(2 pi i j / m), j = 0..m-1, via FFT.

    Exact for supports no wider than the grid.
    """
    if len(f) > m:
        raise ValueError("grid smaller than the coefficient support")
    coeffs = f.coeffs
    idx = np.arange(f.lo, f.hi + 1)
    if radius != 1.0:
        with np.errstate(over="ignore"):
            coeffs = coeffs * np.power(float(radius), idx.astype(np.float64))
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficient scaling overflowed at this radius")
    buf = np.zeros(m, dtype=np.complex128)
    np.add.at(buf, idx % m, coeffs)
    return np.fft.ifft(buf) * m
