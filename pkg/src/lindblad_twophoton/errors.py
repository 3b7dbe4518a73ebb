"""Exception hierarchy shared by all modules."""


class LindbladError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimensionError(LindbladError, ValueError):
    pass


class InvalidModelError(LindbladError, ValueError):
    pass


class TruncationError(LindbladError, RuntimeError):
    """Fock cutoff too small for the state being represented.

    ``required_n_cut`` is the smallest cutoff that would satisfy the tail
    bound, when it can be determined.
    """

    def __init__(self, message, required_n_cut=None):
        super().__init__(message)
        self.required_n_cut = required_n_cut


class UnmappableError(LindbladError, ValueError):
    """The two-photon point needs a negative pump in the one-photon model."""

    def __init__(self, message, deficit):
        super().__init__(message)
        self.deficit = deficit


class IntegrationError(LindbladError, RuntimeError):
    """Step-size underflow or trace drift during time evolution."""


class SteadyStateError(LindbladError, RuntimeError):
    pass


class DegenerateSteadyStateError(SteadyStateError):
    pass


class CapExceededError(SteadyStateError):
    pass


class ConvergenceError(SteadyStateError):
    pass
