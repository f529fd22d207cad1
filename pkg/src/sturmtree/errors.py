"""Exception types shared across the package."""


class SturmTreeError(Exception):
    """Base class for all library errors."""


class EigSyntaxError(SturmTreeError):
    """Malformed `.eig` input."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateVertexError(EigSyntaxError):
    pass


class UnknownVertexError(SturmTreeError):
    """A vertex id was referenced that is not in the graph."""


class TruncationHitError(SturmTreeError):
    """An exact computation needed data beyond a truncated end."""


class RadiusError(SturmTreeError):
    """A restriction radius exceeded the ball radius."""


class ConcatError(SturmTreeError):
    pass


class EndMismatchError(ConcatError):
    """Joining vertices disagree on edge index, loop index or color."""


class IndexOutOfRangeError(ConcatError):
    """A concatenation index violates its admissible range."""


class NotSturmianError(SturmTreeError):
    """The coloring fails the b_n = n + 2 pattern at some level."""

    def __init__(self, level: int, reason: str):
        super().__init__(f"level {level}: {reason}")
        self.level = level


class AmbiguousAssignmentError(SturmTreeError):
    """The two extensions of a special ball cannot be told apart."""

    def __init__(self, level: int, reason: str):
        super().__init__(f"level {level}: {reason}")
        self.level = level


class IllDefinedIndexError(SturmTreeError):
    """Representatives of one ball class disagree on a neighbor count."""


class HorizonError(SturmTreeError):
    """The graph prefix is too short for the requested computation."""


class DecompositionMismatchError(SturmTreeError):
    """A predicted level-to-level concatenation failed to verify."""

    def __init__(self, level: int, reason: str):
        super().__init__(f"level {level}: {reason}")
        self.level = level


class AdmissibilityError(SturmTreeError):
    """An index or side sequence violates the synthesis constraints."""


class PrecisionInsufficientError(SturmTreeError):
    """A rational slope is too coarse for the requested word length."""


class PrefixTooShortError(SturmTreeError):
    """A finite word is too short to certify a property of its infinite extension."""
