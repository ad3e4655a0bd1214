"""Numerical laboratory for orthogonal polynomials on the unit circle.

Computes Verblunsky coefficients from circle weights, the Szego/scattering
functions, and weighted-algebra decay diagnostics, and mechanically verifies
the decay-rate theorems (including the constructive pole-removal extension)
at finite truncation.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .algebra import (BeurlingWeight, LaurentSeries, conj_reflect, convolve,
                      evaluate, evaluate_on_circle, exp_one_sided, nu_eval,
                      nu_norm, project_minus, project_plus)
from .baxter import (BaxterReport, annulus_zeros, baxter_check,
                     bernstein_modify, extend_baxter, membership_evidence,
                     poly_from_roots, product_check)
from .engine import (MomentTable, PolynomialPair, VerblunskySequence,
                     WeightSpec, auto_quadrature, compute_moments,
                     forward_recurrence, gram_schmidt_oracle, hatted_form,
                     levinson, monic_from_alphas, reconstruct_weight,
                     sample_grid)
from .errors import (BoundaryAmbiguousZeroError, ConfigError,
                     DegenerateMomentsError, OpucError, OracleUnreliableError,
                     PreconditionError, QuadratureError,
                     RootSetUnreliableError, WeightSpecError)
from .fitting import DecayFit, decay_rate
from .scattering import (ErrorProfile, LogWeightCoeffs, ScatteringData,
                         error_profile, f_minus_series, f_plus_series,
                         log_weight_coeffs, predict_alphas, scattering_data,
                         scattering_series, unimodularity_defect)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # algebra
    "BeurlingWeight", "LaurentSeries", "conj_reflect", "convolve", "evaluate",
    "evaluate_on_circle", "exp_one_sided", "nu_eval", "nu_norm",
    "project_minus", "project_plus",
    # engine
    "MomentTable", "PolynomialPair", "VerblunskySequence", "WeightSpec",
    "auto_quadrature", "compute_moments", "forward_recurrence",
    "gram_schmidt_oracle", "hatted_form", "levinson", "monic_from_alphas",
    "reconstruct_weight", "sample_grid",
    # scattering
    "ErrorProfile", "LogWeightCoeffs", "ScatteringData", "error_profile",
    "f_minus_series", "f_plus_series", "log_weight_coeffs", "predict_alphas",
    "scattering_data", "scattering_series", "unimodularity_defect",
    # fitting / baxter
    "DecayFit", "decay_rate", "BaxterReport", "annulus_zeros", "baxter_check",
    "bernstein_modify", "extend_baxter", "membership_evidence",
    "poly_from_roots", "product_check",
    # errors
    "OpucError", "WeightSpecError", "QuadratureError", "DegenerateMomentsError",
    "OracleUnreliableError", "RootSetUnreliableError",
    "BoundaryAmbiguousZeroError", "PreconditionError", "ConfigError",
]
