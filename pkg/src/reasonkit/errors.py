"""Exception types shared across the package."""


class ReasonKitError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ReasonKitError, ValueError):
    """An argument violates an operation's precondition."""


class UnknownVariableError(ReasonKitError, KeyError):
    def __init__(self, name):
        super().__init__(f"unknown variable: {name!r}")
        self.name = name


class UnknownStateError(ReasonKitError, KeyError):
    def __init__(self, variable, state):
        super().__init__(f"unknown state {state!r} for variable {variable!r}")
        self.variable = variable
        self.state = state


class CapacityError(ReasonKitError, RuntimeError):
    """An exhaustive operation would exceed its configured budget.

    Exhaustive operations are exact by contract; instead of silently
    sampling we fail loudly with the offending size.
    """

    def __init__(self, what, size, budget):
        super().__init__(f"{what} requires {size} > budget {budget}")
        self.what = what
        self.size = size
        self.budget = budget


class ClassifierIntegrityError(ReasonKitError):
    """Class formulas are not mutually exclusive / exhaustive for an input."""


class ValidationError(ReasonKitError):
    """A model document or graph failed structural validation.

    ``issues`` is a list of human-readable strings, each naming the node
    or field at fault.
    """

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [issues]
        super().__init__("; ".join(issues))
        self.issues = list(issues)


class ConfigurationError(ReasonKitError):
    """A model is under-specified (e.g. even forest without a tie rule)."""


class UnsupportedSplitError(ReasonKitError):
    """A numeric tree uses a split predicate other than a threshold test."""


class InvalidDistributionError(ReasonKitError):
    """A probability table contains zeros or does not normalize."""
