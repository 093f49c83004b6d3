"""Exception types shared across the package."""


class SupportVarError(Exception):
    """Base class for all package errors."""


class RadicalFailure(SupportVarError):
    pass


class NonSplitSimple(SupportVarError):
    pass


class NonSplitEnd(SupportVarError):
    pass


class MissingHopf(SupportVarError):
    pass


class Inconclusive(SupportVarError):
    pass


class CacheCorrupt(SupportVarError):
    pass


class LiftFailure(SupportVarError):
    pass


class SequenceTooShort(SupportVarError):
    pass


class ZeroClass(SupportVarError):
    pass


class OddDegree(SupportVarError):
    pass


class ZeroProduct(SupportVarError):
    pass


class NotFound(SupportVarError):
    pass


class PreconditionError(SupportVarError):
    pass


class CannotSplit(SupportVarError):
    """Raised by the variety splitting procedure; ``stage`` names where it stopped."""

    def __init__(self, stage: str, message: str, diagnostics=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.diagnostics = diagnostics or {}


class Disagreement(SupportVarError):
    """Two independent routes to the same verdict disagree."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InvalidParams(SupportVarError):
    pass
