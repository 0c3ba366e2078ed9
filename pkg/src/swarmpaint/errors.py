"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A parameter or scenario value violates a documented precondition."""


class StripTooThinError(ConfigurationError):
    """Strip height is below the 2*eta brush width.

    A world of breadth B split into N strips can only be painted when
    N * 2 * eta <= B.
    """


class ProtocolViolation(RuntimeError):
    """An observed robot configuration breaks a protocol assumption."""


class LivenessError(RuntimeError):
    """Simulated time exceeded the watchdog bound.

    Carries the partial trace so the stuck configuration can be inspected.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
