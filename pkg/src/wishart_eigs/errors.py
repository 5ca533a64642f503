"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A distribution or ensemble parameter is outside its valid domain."""


class SolverError(RuntimeError):
    """An eigenvalue or root-finding routine failed.

    ``diagnostics`` carries whatever state the routine had when it gave up
    (iteration counts, bracket endpoints, offending index).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({extra})"
