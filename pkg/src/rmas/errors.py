class RmasError(Exception):
    """Base class for domain errors (mapped to exit status 1 by the CLI)."""

    kind = "error"


class InstanceError(RmasError):
    kind = "invalid-instance"


class ParseError(InstanceError):
    kind = "parse-error"

    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InfeasibleLabelingError(RmasError):
    kind = "infeasible-labeling"


class CapExceededError(RmasError):
    kind = "cap-exceeded"

    def __init__(self, size, cap):
        super().__init__(f"search space {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class LpError(RmasError):
    """Raised by the simplex solver; ``status`` is infeasible, unbounded or numerical."""

    kind = "lp-error"

    def __init__(self, status, message):
        super().__init__(f"{status}: {message}")
        self.status = status


class GenSpecError(RmasError):
    kind = "bad-generator-spec"
