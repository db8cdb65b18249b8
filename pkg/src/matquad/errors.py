"""Exception hierarchy for matquad."""


class MatquadError(Exception):
    """Base class for all errors raised by this package."""


class SymmetryError(MatquadError, ValueError):
    """Input matrix was required to be symmetric and is not."""


class NotSPDError(MatquadError, ValueError):
    """Input matrix was required to be symmetric positive definite."""


class NotPSDError(MatquadError, ValueError):
    """Input matrix was required to be positive semidefinite."""


class DivisionError(MatquadError, ValueError):
    """Right division by a polynomial with a singular leading coefficient."""


class InvalidPairError(MatquadError, ValueError):
    """col(X J^l) is singular, so (X, J) is not a Jordan pair of any monic
    polynomial of the requested degree."""


class InvalidChainError(MatquadError, ValueError):
    """A Jordan chain was given with a zero leading vector."""


class DegenerateWeightError(MatquadError, ValueError):
    """The weight's zeroth moment is singular."""


class RankDeficiencyError(MatquadError, ArithmeticError):
    """The Stieltjes residual Gram matrix lost positive definiteness."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"<R_{index}, R_{index}> is not SPD")


class MultiplicityError(MatquadError, ArithmeticError):
    """Null space dimension of P_n(x_i) disagrees with the eigenvalue cluster."""

    def __init__(self, node, expected, found):
        self.node, self.expected, self.found = node, expected, found
        super().__init__(
            f"node {node!r}: cluster multiplicity {expected} but null space "
            f"dimension {found}"
        )


class AmbiguousClusterError(MatquadError, ArithmeticError):
    """Eigenvalue gap falls too close to the clustering tolerance."""


class InterpolationError(MatquadError, ValueError):
    """Interpolation data is inconsistent or leads to a singular system."""


class KernelDegeneracyError(MatquadError, ArithmeticError):
    """V^T K_{n-1}(x_i, x_i) V is not numerically positive definite."""


class OracleError(MatquadError, RuntimeError):
    """Adaptive integration did not reach the requested accuracy."""

    def __init__(self, message, estimate=None, abserr=None):
        self.estimate, self.abserr = estimate, abserr
        super().__init__(message)
