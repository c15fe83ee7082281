class TCoulombError(Exception):
    pass


class InconsistentModelError(TCoulombError):
    """Two unit frames disagree on the coupling beta."""


class IntegrityError(TCoulombError):
    """A certified property of the exact solutions does not hold."""


class ResourceLimitError(IntegrityError):
    """A polynomial would exceed the configured maximum degree."""


class InterpolationRangeError(TCoulombError):
    pass


class QuadratureError(TCoulombError):
    pass


class UnboundStateError(TCoulombError):
    pass


class ConvergenceError(TCoulombError):

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
