class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class InvalidOrderError(DomainError):
    """The entropy order ``q`` is not admissible for the requested quantity."""


class SpectrumError(DomainError):
    """A probability vector is not normalised or has entries outside [0, 1]."""
