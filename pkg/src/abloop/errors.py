class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class GateNotDiagonalError(DomainError):
    """A two-qubit matrix is too far from diagonal to read off phases."""
