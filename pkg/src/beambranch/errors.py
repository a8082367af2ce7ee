"""Exception and warning types shared across the package."""


class BeamBranchError(Exception):
    """Base class for all errors raised by beambranch."""


# -- problem construction ----------------------------------------------------

class MalformedConfig(BeamBranchError):
    """Config text is structurally invalid: unknown kind, bad arity, missing key."""


class InvalidExponent(BeamBranchError):
    """Exponent constraints violated (rho < 1 or sigma <= 0)."""


class NegativeData(BeamBranchError):
    """Sampled weight or kernel data is negative where nonnegativity is required."""


class ArityMismatch(BeamBranchError):
    """Tabulated data length does not match the grid."""


# -- linear operator ---------------------------------------------------------

class SingularOperator(BeamBranchError):
    """Factorization of the hinged operator broke down (zero pivot)."""


class DimensionMismatch(BeamBranchError):
    """Vector or matrix size inconsistent with the operator dimension."""


# -- eigen computations ------------------------------------------------------

class NoConvergence(BeamBranchError):
    """Iteration budget exhausted before the requested tolerance was met."""


class NonPositiveEigenfunction(BeamBranchError):
    """Converged principal eigenfunction has a nonpositive entry."""


class DegenerateDeflation(BeamBranchError):
    """Weighted norms collapsed while deflating for a higher eigenpair."""


class ZeroDenominator(BeamBranchError):
    """Rayleigh quotient denominator vanished."""


# -- nonlinear term ----------------------------------------------------------

class SingularDerivative(BeamBranchError):
    """Derivative of the interaction term is singular (sigma < 1 at a nonpositive entry)."""


# -- continuation ------------------------------------------------------------

class NewtonDiverged(BeamBranchError):
    """Newton corrector failed: iteration limit, blow-up, or degenerate constraint."""


class PositivityLost(BeamBranchError):
    """An iterate or solution left the positive cone."""


class NoBracket(BeamBranchError):
    """No branch segment brackets the requested parameter value."""


class ModelAssumptionWarning(UserWarning):
    """A modelling assumption is at its boundary; results may need extra scrutiny."""
