"""Exception types shared across the package (and mapped to CLI exit codes)."""


class ValidationError(ValueError):
    """Bad configuration, file contents, or operation preconditions."""


class SizeGuardError(ValueError):
    """A dense-representation guard (qubit count cap) was exceeded."""


class NumericalError(RuntimeError):
    """Non-finite or diverging numerics during optimization."""
