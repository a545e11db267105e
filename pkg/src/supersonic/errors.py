"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class PropagationFailure(RuntimeError):
    """Raised when a propagator cannot meet its tolerance within budget."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ResourceExhausted(RuntimeError):
    """Raised when a problem size exceeds a configured hard cap."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class InfeasibleProblem(ValueError):
    pass


class FitFailure(RuntimeError):
    pass
