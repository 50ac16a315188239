"""Exception types shared across the package."""


class BrunoError(Exception):
    """Base class for all errors raised by brunonf."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ScalarMismatch(BrunoError):
    code = "scalar_mismatch"


class DimensionMismatch(BrunoError):
    code = "dimension_mismatch"


class NotAUnit(BrunoError):
    code = "not_a_unit"


class NotLogarithmic(BrunoError):
    code = "not_logarithmic"

    def __init__(self, index, term=None):
        self.index = index
        self.term = term
        msg = f"component {index} is not divisible by its coordinate"
        if term is not None:
            msg += f" (offending term {term})"
        super().__init__(msg)

    def to_dict(self):
        d = super().to_dict()
        d["index"] = self.index
        if self.term is not None:
            d["term"] = self.term
        return d


class SingularBasis(BrunoError):
    code = "singular_basis"


class ResonantInput(BrunoError):
    code = "resonant_input"


class NotGradedZero(BrunoError):
    code = "not_graded_zero"


class NonDegenerate(BrunoError):
    """The semisimple part vanishes (lambda = 0)."""

    code = "degenerate_linear_part"


class NotInNormalForm(BrunoError):
    code = "not_in_normal_form"


class NonSplitSpectrum(BrunoError):
    code = "non_split_spectrum"


class NotADerivation(BrunoError):
    code = "not_a_derivation"


class BudgetExceeded(BrunoError):
    code = "budget_exceeded"


class ZeroLambda(BrunoError):
    code = "zero_lambda"


class NotInvertible(BrunoError):
    code = "not_invertible"


class ParseError(BrunoError):
    """Syntax error with a source position and the set of expected tokens."""

    code = "syntax_error"

    def __init__(self, message, line=None, column=None, expected=None):
        self.line = line
        self.column = column
        self.expected = sorted(expected) if expected else []
        where = f"line {line}, column {column}: " if line is not None else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(where + message + tail)

    def to_dict(self):
        d = super().to_dict()
        d.update({"line": self.line, "column": self.column, "expected": self.expected})
        return d


class UnknownVariable(ParseError):
    code = "unknown_variable"


class MixedScalars(ParseError):
    code = "mixed_scalars"
