"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI prints it and maps the
class onto an exit status.
"""


class TorofiberError(Exception):
    code = "error"


class InputError(TorofiberError):
    """Malformed user input (exit status 2)."""

    code = "input"


class SchemaError(InputError):
    code = "schema"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IndexRangeError(InputError):
    code = "index"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MathError(TorofiberError):
    """A precondition of a mathematical operation is violated."""

    code = "math"


class NonSimplicial(MathError):
    code = "non-simplicial"


class NotStronglyConvex(MathError):
    code = "not-strongly-convex"


class FaceIntersectionViolation(MathError):
    code = "face-intersection"


class NonPrimitiveRay(MathError):
    code = "non-primitive-ray"


class ConeNotInFan(MathError):
    code = "cone-not-in-fan"


class RayNotInFan(MathError):
    code = "ray-not-in-fan"


class NotComplete(MathError):
    code = "not-complete"


class RingMismatch(MathError):
    code = "ring-mismatch"


class NotEquidimensional(MathError):
    code = "not-equidimensional"


class NotReduced(MathError):
    code = "not-reduced"


class NotProper(MathError):
    code = "not-proper"


class TargetNotSmooth(MathError):
    code = "target-not-smooth"


class DisconnectedCover(MathError):
    code = "disconnected-cover"


class NotSmoothStrata(MathError):
    code = "not-smooth-strata"


class InvariantNegative(MathError):
    code = "invariant-negative"


class IndexOutOfRange(MathError):
    code = "index-out-of-range"


class NotUnipotent(MathError):
    code = "not-unipotent"


class TruncationTooSmall(MathError):
    code = "truncation-too-small"


class SignConventionFailure(MathError):
    """d1 o d1 != 0: an internal bug, never a user error."""

    code = "sign-convention"
