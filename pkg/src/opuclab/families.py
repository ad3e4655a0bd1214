"""Built-in weight families with closed-form structure.

These are the weights the verification suites run against.  Each rational
member is w = |q(e^{i theta})|^2 / |p(e^{i theta})|^2 with q, p zero free on
the circle, so the interior Szego factor is the outer ratio p~/q~: its poles
(the numerator roots of w, reflected outside the disk when needed) set the
asymptotic decay rate of the recurrence coefficients, while its zeros (the
denominator roots) are the annulus zeros the pole-removal pipeline must find.
"""

from __future__ import annotations

import numpy as np

from .algebra import LaurentSeries
from .engine import WeightSpec


def bernstein_szego(a: complex) -> WeightSpec:
    """w = 1 / |1 - a e^{i theta}|^2 for |a| < 1: coefficients (a, 0, 0, ...)."""
    if abs(a) >= 1:
        raise ValueError("Bernstein-Szego parameter must satisfy |a| < 1")
    return WeightSpec.rational((1.0,), (1.0, -a))


def rational_ratio(a: complex, b: complex) -> WeightSpec:
    """w = |1 - a e^{i theta}|^2 / |1 - b e^{i theta}|^2 (|a|, |b| < 1).

    The coefficient decay rate is 1/|a| (the numerator root reflected through
    f_plus); the inverse weight vanishes at 1/b.
    """
    return WeightSpec.rational((1.0, -a), (1.0, -b))


def two_pole() -> WeightSpec:
    """w = |1 - 0.2 e^{it}|^2 / (|1 - 0.5 e^{it}|^2 |1 - 0.45 e^{it}|^2).

    Coefficient decay rate 5; the inverse weight vanishes at 2 and 1/0.45,
    both inside the |z| < 3 annulus used by the pole-removal demos.
    """
    den = np.convolve([1.0, -0.5], [1.0, -0.45])
    return WeightSpec.rational((1.0, -0.2), den)


def shifted_cosine() -> WeightSpec:
    """w = 2 + cos(theta), a strictly positive trig polynomial."""
    return WeightSpec.trig_poly(
        LaurentSeries([0.5, 2.0, 0.5], -1))


def rational_family() -> dict[str, WeightSpec]:
    """The rational test family keyed by id.

    Numerator parameters avoid 0.5, -0.4 and 0.4 (the circle-reflected images
    of the Bernstein modification roots {0.5, -0.4, 2.5} used by the
    verification suite), so that |p|^-2 modifications never cancel the factor
    that sets a member's decay rate.
    """
    return {
        "bs_plus_half": bernstein_szego(0.5),
        "bs_minus_half": bernstein_szego(-0.5),
        "ratio_r2": rational_ratio(-0.5, 0.5),
        "ratio_r2_2": rational_ratio(0.45, -0.45),
        "ratio_r1_25": rational_ratio(0.8, -0.8),
        "two_pole": two_pole(),
    }


# Asymptotic |alpha_n|^(1/n) reciprocals for the family above (inf marks the
# finitely supported Bernstein-Szego members).  Derived from the factorized
# construction; verified against the Levinson output in the test suite.
ALPHA_DECAY_RATES: dict[str, float] = {
    "bs_plus_half": float("inf"),
    "bs_minus_half": float("inf"),
    "ratio_r2": 2.0,
    "ratio_r2_2": 1.0 / 0.45,
    "ratio_r1_25": 1.25,
    "two_pole": 5.0,
}
