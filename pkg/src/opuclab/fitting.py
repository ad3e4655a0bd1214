"""Log-linear decay-rate estimation for coefficient sequences.

A fit of log|x_n| against n over a window yields the decay exponent
lambda (slope) and the implied radius R = exp(-lambda).  Entries at or below
the zero threshold are treated as exact zeros and excluded; an all-zero
window gets the R = inf sentinel instead of a fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ZERO_THRESHOLD = 1e-14
# RMS log-residual above this flags the fit as unreliable.
RESIDUAL_THRESHOLD = 0.5


@dataclass(frozen=True)
class DecayFit:
    """Fitted exponent of |x_n| ~ C exp(slope * n) over a window."""

    slope: float
    intercept: float
    residual: float
    window: tuple[int, int]
    n_used: int
    status: str  # "ok" | "identically_zero" | "insufficient"
    unreliable: bool = False

    @property
    def implied_R(self) -> float:
        if self.status == "identically_zero":
            return math.inf
        if self.status != "ok":
            return math.nan
        return math.exp(-self.slope)

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "window": list(self.window),
            "n_used": self.n_used,
            "status": self.status,
            "unreliable": self.unreliable,
            "implied_R": self.implied_R,
        }


def _sentinel(status: str, window: tuple[int, int], n_used: int) -> DecayFit:
    return DecayFit(slope=math.nan, intercept=math.nan, residual=math.nan,
                    window=window, n_used=n_used, status=status)


def decay_rate(values, window: tuple[int, int]) -> DecayFit:
    """Least-squares fit of (n, log|x_n|) over the inclusive window [lo, hi].

    Entries with |x_n| <= 1e-14 are treated as exact zeros and excluded.
    All-zero window -> "identically_zero" (implied R = inf); fewer than four
    usable points -> "insufficient".
    """
    x = np.asarray(values)
    lo, hi = int(window[0]), int(window[1])
    if lo < 0 or hi < lo:
        raise ValueError(f"bad window {window!r}")
    hi = min(hi, x.size - 1)
    if hi < lo:
        return _sentinel("insufficient", (lo, int(window[1])), 0)
    idx = np.arange(lo, hi + 1)
    mags = np.abs(x[lo : hi + 1])
    usable = mags > ZERO_THRESHOLD
    n_used = int(usable.sum())
    win = (lo, int(window[1]))
    if n_used == 0:
        return _sentinel("identically_zero", win, 0)
    if n_used < 4:
        return _sentinel("insufficient", win, n_used)
    n = idx[usable].astype(np.float64)
    y = np.log(mags[usable])
    slope, intercept = np.polyfit(n, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * n + intercept)) ** 2)))
    return DecayFit(slope=float(slope), intercept=float(intercept),
                    residual=residual, window=win, n_used=n_used, status="ok",
                    unreliable=residual > RESIDUAL_THRESHOLD)
