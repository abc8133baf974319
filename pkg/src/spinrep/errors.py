"""Exception types shared across the package."""


class SpinrepError(Exception):
    """Base class for errors raised by spinrep."""


class InputError(SpinrepError):
    """A caller violated a documented precondition."""


class StructureError(SpinrepError):
    """An internal structural assumption failed (singular solve, bad module)."""


class IntegrationError(SpinrepError):
    """Numerical integration failed; carries the offending curve parameter."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t
