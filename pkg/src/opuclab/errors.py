"""Exception types shared across the package."""


class OpucError(Exception):
    """Base class for package-specific failures."""


class WeightSpecError(OpucError):
    """Weight specification malformed, non-real, or not strictly positive."""


class QuadratureError(OpucError):
    """Quadrature size incompatible with the requested truncation."""


class DegenerateMomentsError(OpucError):
    """Levinson step produced |alpha_n| >= 1 - tol (loss of positive definiteness)."""

    def __init__(self, step: int, magnitude: float):
        self.step = step
        self.magnitude = magnitude
        super().__init__(
            f"moment table numerically degenerate at step {step} "
            f"(|alpha| = {magnitude:.17g})"
        )


class OracleUnreliableError(OpucError):
    """Dense Toeplitz system too ill-conditioned for the Gram-Schmidt oracle."""


class RootSetUnreliableError(OpucError):
    """Argument-principle count disagrees with the located roots."""


class BoundaryAmbiguousZeroError(OpucError):
    """A zero sits within tolerance of an annulus boundary circle."""


class PreconditionError(OpucError):
    """A pipeline precondition failed on the supplied inputs."""


class ConfigError(OpucError):
    """Run configuration file malformed or inconsistent."""
