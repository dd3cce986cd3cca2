"""Exception types shared across the package.

The CLI maps these to exit codes: PrecisionLoss -> 3, precondition
violations -> 4.
"""


class ShtukaError(Exception):
    pass


class PrecisionLoss(ShtukaError):
    """A required coefficient lies beyond the known precision window."""


class Singular(ShtukaError):
    """A matrix that must be invertible is exactly singular."""


class PreconditionError(ShtukaError):
    """An operation was called outside its contract."""


class NotInSubgroup(PreconditionError):
    pass


class NotFundamental(PreconditionError):
    pass


class NotInCell(PreconditionError):
    pass


class NotUnipotentPart(PreconditionError):
    pass


class NotCentral(PreconditionError):
    pass


class IncompatibleInvariants(PreconditionError):
    pass


class BudgetExceeded(PreconditionError):
    """An enumeration would exceed the configured point budget."""
