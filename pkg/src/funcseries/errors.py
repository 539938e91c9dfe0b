"""Exception types shared across the package."""


class FuncSeriesError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(FuncSeriesError):
    """Input text does not conform to the expression grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownFunction(ParseError):
    """A call names a function outside the supported set."""


class MultipleVariables(ParseError):
    """More than one distinct variable letter appears in one expression."""


class SingularEvaluation(FuncSeriesError):
    """Evaluation hit a pole, branch point, or produced a non-finite value."""


class ConstantComposite(FuncSeriesError):
    """The inner function's derivative is identically zero."""


class CompositeDerivativeZero(FuncSeriesError):
    """The inner function's derivative vanishes at the expansion point."""


class SingularAtExpansionPoint(FuncSeriesError):
    """Some quantity needed for the expansion is not evaluable at the point."""


class InverseMismatch(FuncSeriesError):
    """The supplied inverse does not undo the inner function at the point."""


class DivisionBySingularSeries(FuncSeriesError):
    """Truncated-series division by a series with (near-)zero constant term."""


class CompositionOffsetNonzero(FuncSeriesError):
    """Truncated-series composition requires the inner constant term to be 0."""


class LeadingCoefficientZero(FuncSeriesError):
    """The shifted inner series has no linear term, so matching cannot start."""


class NonMonotoneComposite(FuncSeriesError):
    """The inner function is not monotone on the requested real segment."""


class QuadratureSingularity(FuncSeriesError):
    """A contour integrand is singular or non-finite at a quadrature node."""


class AnnulusViolation(FuncSeriesError):
    """The evaluation point lies outside the expansion's validity annulus."""
