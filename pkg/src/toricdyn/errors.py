"""Exception hierarchy.

Every error carries a ``kind`` string; the CLI reports it verbatim in its
machine-readable stderr payload.
"""


class ToricDynError(Exception):
    kind = "ERROR"


class SingularMatrixError(ToricDynError, ValueError):
    kind = "SINGULAR"


class DimensionMismatchError(ToricDynError, ValueError):
    kind = "DIMENSION_MISMATCH"


class NotStronglyConvexError(ToricDynError, ValueError):
    kind = "NOT_STRONGLY_CONVEX"


class DimensionGapError(ToricDynError, ValueError):
    kind = "DIMENSION_GAP"


class IncompatibleError(ToricDynError, ValueError):
    kind = "INCOMPATIBLE"


class UnsupportedTargetError(ToricDynError, ValueError):
    kind = "UNSUPPORTED_TARGET"


class GenericityFailure(ToricDynError, RuntimeError):
    kind = "GENERICITY_FAILURE"


class ExhaustedError(ToricDynError, RuntimeError):
    kind = "EXHAUSTED"


class InputError(ToricDynError, ValueError):
    kind = "INPUT"


class InvariantFailure(ToricDynError, RuntimeError):
    kind = "INVARIANT_FAILURE"
