"""
Exceptions raised by the library. The CLI maps ViabilityViolation to the
"scientific negative" exit code and everything else to a failure.
"""


class MFViabilityError(Exception):
    """Base class of all library errors."""


class DimensionMismatchError(MFViabilityError, ValueError):
    pass


class InvalidMeasureError(MFViabilityError, ValueError):
    pass


class InstanceTooLargeError(MFViabilityError):

    def __init__(self, size, cap):
        super().__init__("instance too large for exact solver "
                         "({} > {})".format(size, cap))
        self.size = size
        self.cap = cap


class BaseMismatchError(MFViabilityError):

    def __init__(self):
        super().__init__("lifted metric requires identical base marginal")


class MarginalMismatchError(MFViabilityError):
    pass


class ConcatenationError(MFViabilityError):

    def __init__(self, detail=None):
        message = "concatenation requires matching marginals at the junction"
        if detail:
            message += " ({})".format(detail)
        super().__init__(message)


class PathError(MFViabilityError):
    pass


class DynamicsError(MFViabilityError):
    pass


class SelectorError(DynamicsError):

    def __init__(self, step, atom, distance):
        super().__init__(
            "selector leaves the vectogram at step {}, atom {} "
            "(distance {:.3e})".format(step, atom, distance))
        self.step = step
        self.atom = atom
        self.distance = distance


class OracleError(MFViabilityError):
    pass


class ViabilityViolation(MFViabilityError):
    """
    Raised by the viable-tracking scheme when no witness in T_K(nu) ∩ F(nu)
    is found. Carries the offending projection nu.
    """

    def __init__(self, step, nu, score):
        super().__init__("viability condition violated at step {} "
                         "(score {:.6g})".format(step, score))
        self.step = step
        self.nu = nu
        self.score = score


class ConfigError(MFViabilityError):
    pass
