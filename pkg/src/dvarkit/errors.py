"""Exception hierarchy shared by all dvarkit modules."""


class DvarkitError(Exception):
    """Base class for all errors raised by dvarkit."""


class ZeroDenominator(DvarkitError):
    pass


class UnknownVariable(DvarkitError):
    def __init__(self, name):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


class DuplicateVariable(DvarkitError):
    def __init__(self, name):
        super().__init__(f"variable {name!r} declared twice")
        self.name = name


class ExpressionSyntaxError(DvarkitError):
    """Malformed expression or problem file; carries an offset or line number."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class MissingSection(DvarkitError):
    pass


class MalformedRHS(DvarkitError):
    pass


class DegenerateLeadingDerivative(DvarkitError):
    pass


class NotSolvable(DvarkitError):
    pass


class DenominatorVanishesOnVariety(DvarkitError):
    pass


class InconsistentIdeal(DvarkitError):
    pass


class NotZeroDimensional(DvarkitError):
    pass


class InitialConditionOffVariety(DvarkitError):
    pass


class PoleEncountered(DvarkitError):
    def __init__(self, message, last_good_t=None):
        super().__init__(message)
        self.last_good_t = last_good_t


class DenominatorNearZeroOnTrajectory(DvarkitError):
    pass
