class CSysError(Exception):
    """Root of every error raised by the core package."""


class CompositionError(CSysError):
    pass


class IndexRangeError(CSysError):
    pass


class ArityError(CSysError):
    pass


class SignatureError(CSysError):
    pass


class SortError(CSysError):
    pass


class DepthError(CSysError):
    pass


class StructureError(CSysError):
    pass


class SectionError(CSysError):
    pass


class TelescopeError(CSysError):
    pass


class PreconditionError(CSysError):
    pass


class ConsistencyError(CSysError):
    pass


class EmptyCarrierError(CSysError):
    pass


class BopDomainError(CSysError):
    """A B-operation was applied outside its domain of definition."""

    def __init__(self, op, condition, detail=""):
        self.op = op
        self.condition = condition
        message = f"{op}: domain condition violated: {condition}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
