"""Domain error hierarchy.

Every error that a caller can trigger with bad-but-well-formed input derives
from DomainError and carries a stable machine-readable ``code``; the CLI maps
these to exit status 2.  Programming errors (wrong types, impossible state)
stay ordinary ValueError/TypeError.
"""


class DomainError(Exception):
    code = "domain_error"


class BadReduction(DomainError):
    """The curve has bad reduction at p (p divides the model discriminant)."""

    code = "bad_reduction"

    def __init__(self, p, message=None):
        self.p = p
        super().__init__(message or f"bad reduction at p={p}")


class InvalidCurve(DomainError):
    code = "invalid_curve"


class UnsupportedPrime(DomainError):
    code = "p_out_of_range"


class MismatchedField(DomainError):
    code = "mismatched_field"


class RepeatedRoot(DomainError):
    code = "repeated_root"


class InvalidWeilPolynomial(DomainError):
    code = "invalid_weil_polynomial"


class InvalidArgument(DomainError):
    code = "invalid_argument"


class EmptySweep(DomainError):
    code = "empty_sweep"


class MissingPrime(DomainError):
    code = "missing_prime"

    def __init__(self, p, message=None):
        self.p = p
        super().__init__(message or f"no Fourier coefficient supplied for p={p}")


class PrecisionMismatch(DomainError):
    code = "precision_mismatch"


class OddPrimeRequired(DomainError):
    code = "odd_prime_required"


class DimensionMismatch(DomainError):
    code = "dimension_mismatch"


class PrecisionBelowSturm(DomainError):
    code = "precision_below_sturm"


class MissingForm(DomainError):
    code = "missing_form"


class DegenerateModulus(DomainError):
    """The distinguished coefficient vector lies inside its own complement."""

    code = "no_constraint"


class ParseError(DomainError):
    code = "parse_error"

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class SchemaError(DomainError):
    code = "schema_error"


class LengthMismatch(DomainError):
    code = "length_mismatch"
