"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """Structurally bad argument (wrong sign, empty rule, ...)."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation exactly at a pole."""


class ContractError(ValueError):
    """A caller-supplied certificate (decay bound, self-reciprocity) is missing or violated."""


class AccuracyError(ArithmeticError):
    """A computed residual exceeded the promised tolerance."""


class NumericError(ArithmeticError):
    """An underlying numerical routine failed to converge."""


class SingularInputError(ValueError):
    """Input hits a removable singularity the implementation does not take limits through."""


class AccuracyWarning(UserWarning):
    """Result returned, but the attached error estimate is weaker than requested."""
