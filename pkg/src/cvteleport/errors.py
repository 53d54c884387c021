"""Exception hierarchy."""


class PhaseConventionError(ValueError):
    """A closed-form expression was asked for outside the phases it holds at."""


class DomainError(ValueError):
    """A closed-form result fell outside its physical range."""


class ComputeError(RuntimeError):
    """A numerical evaluation failed."""


class ConvergenceError(ComputeError):
    """A numerical oracle did not reach the requested tolerance."""


class ConfigError(ValueError):
    """A scenario file or command-line option is malformed."""
