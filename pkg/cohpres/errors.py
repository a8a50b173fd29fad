class CohpresError(Exception):
    """Base class for every error raised by the toolkit."""


class DslSyntaxError(CohpresError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{where}{message}")


class PresentationTypeError(CohpresError):
    """A generator, path or relation does not typecheck."""


class DuplicateNameError(CohpresError):
    pass


class CompositionError(CohpresError):
    """Two paths were composed whose endpoints do not match."""


class ModeError(CohpresError):
    """
    An operation was used where it is not defined: in a mode (path or monoidal)
    that does not support it, or as a residual with no equational side.
    """


class MissingResidualError(CohpresError):
    def __init__(self, f, g):
        self.f = f
        self.g = g
        super().__init__(f"no residual known for the pair ({f}, {g})")


class BudgetExhaustedError(CohpresError):
    def __init__(self, message, bound):
        self.bound = bound
        super().__init__(f"{message} (budget {bound})")


class WeightError(CohpresError):
    pass


class ExplosionError(CohpresError):
    def __init__(self, message, cap):
        self.cap = cap
        super().__init__(f"{message} (cap {cap})")


class TietzeRefusedError(CohpresError):
    pass


class SearchExhaustedError(CohpresError):
    pass
