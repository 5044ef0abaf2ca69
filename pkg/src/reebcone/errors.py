"""Exception and warning types shared across the package.

Exit-code classes used by the CLI: usage errors are handled by argparse,
input errors map to exit code 2, mathematical domain errors to 3, and
non-convergence to 4.
"""


class ReebconeError(Exception):
    """Base class for all package errors."""


class ReebconeWarning(UserWarning):
    """Base class for package warnings (e.g. input normalization)."""


class RayPrimitivizedWarning(ReebconeWarning):
    """An input ray was divided by the gcd of its entries."""


class RedundantRayWarning(ReebconeWarning):
    """An input ray was not an extreme ray of the generated cone and was dropped."""


# -- input errors (exit code 2) ------------------------------------------

class InputError(ReebconeError):
    """Structurally invalid input."""


class SchemaError(InputError):
    """Cone-spec document does not match the expected schema."""


class DimensionMismatch(InputError):
    """A vector's length disagrees with the declared ambient dimension."""


class NonIntegerRay(InputError):
    """A ray generator has a non-integer entry."""


class NotFullDimensional(InputError):
    """The ray generators do not span the ambient space."""


class NotPointed(InputError):
    """The generated cone contains a line."""


class ExceedsSupportedSize(InputError):
    """Input is beyond the supported desk-scale bounds."""


# -- mathematical domain errors (exit code 3) ----------------------------

class MathDomainError(ReebconeError):
    """The requested quantity is undefined for this input."""


class NotQGorenstein(MathDomainError):
    """No rational covector pairs to one with every ray generator."""


class DegenerateSolutionSet(MathDomainError):
    """The Gorenstein system has a positive-dimensional solution set."""


class UnboundedSlice(MathDomainError):
    """The sliced dual cone is unbounded (vector not interior to the cone)."""


class IrrationalReeb(MathDomainError):
    """An exact lattice computation requires a rational Reeb vector."""


class OrderTooLarge(MathDomainError):
    """Requested expansion order exceeds the configured depth."""


class CutoffTooSmall(MathDomainError):
    """Truncated-sum tail estimate exceeds the requested tolerance."""


# -- non-convergence (exit code 4) ----------------------------------------

class ConvergenceError(ReebconeError):
    """An iterative method failed to converge."""


class MaxIterations(ConvergenceError):
    """Iteration limit reached before the stopping test was met."""


class NonConvergent(ConvergenceError):
    """Search direction could not be stabilized (e.g. Hessian indefinite)."""


class LeftReebCone(ReebconeError):
    """A line-search step left the open cone of admissible Reeb vectors.

    Internal control-flow signal; callers backtrack and retry.
    """
