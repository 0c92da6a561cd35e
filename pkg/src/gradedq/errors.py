"""Exception hierarchy for the kernel and the DSL front end."""


class GradedError(Exception):
    """Base class for every error raised by gradedq."""


class DuplicateName(GradedError):
    pass


class NegativeDegree(GradedError):
    pass


class AlgebraMismatch(GradedError):
    pass


class Inhomogeneous(GradedError):
    pass


class DegreeMismatch(GradedError):
    pass


class EvenDegree(GradedError):
    pass


class NotNilpotent(GradedError):
    pass


class NotLocallyNilpotent(GradedError):
    pass


class NotClosed(GradedError):
    pass


class NotAffineBase(GradedError):
    pass


class ConstantObstruction(GradedError):
    pass


class NotBasic(GradedError):
    pass


class NotClosedInternal(GradedError):
    """A result that must be closed by theory is not; indicates a kernel bug."""


class NotVertical(GradedError):
    pass


class NotIdeal(GradedError):
    pass


class NotSplitting(GradedError):
    pass


class NotSymmetric(GradedError):
    pass


class NotHomogeneous(GradedError):
    pass


class NotCompatible(GradedError):
    pass


class MasterEquationFailed(GradedError):
    pass


class SingularPairing(GradedError):
    pass


class BaseNotTangent(GradedError):
    pass


class NotHomomorphism(GradedError):
    pass


class ConjugationFailed(GradedError):
    pass


class NotInvariant(GradedError):
    pass


class NotEquivariantlyClosed(GradedError):
    pass


class DSLError(GradedError):
    """Error carrying a source location (1-based line and column)."""

    def __init__(self, message, line=0, column=0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(DSLError):
    def __init__(self, message, line=0, column=0, expected=()):
        super().__init__(message, line, column)
        self.expected = tuple(expected)

    def __str__(self):
        s = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            s += " (expected one of: " + ", ".join(self.expected) + ")"
        return s


class SemanticError(DSLError):
    """Elaboration failure; ``kind`` names the kernel error class."""

    def __init__(self, message, line=0, column=0, kind="SemanticError"):
        super().__init__(message, line, column)
        self.kind = kind

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"
