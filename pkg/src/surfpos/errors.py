"""Exception taxonomy shared by all modules.

Every domain error carries a stable machine-readable ``code`` so the CLI
can emit structured error objects without string-matching messages.
"""

from __future__ import annotations


class SurfposError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class MixedRadicands(SurfposError):
    code = "mixed-radicands"


class NoRealRoot(SurfposError):
    code = "no-real-root"


class SingularMatrix(SurfposError):
    code = "singular-matrix"


class NotSymmetric(SurfposError):
    code = "not-symmetric"


class DimensionMismatch(SurfposError):
    code = "dimension-mismatch"


class NotFullDimensional(SurfposError):
    code = "not-full-dimensional"


class NotPseudoEffective(SurfposError):
    code = "not-pseudo-effective"


class ModelInconsistency(SurfposError):
    code = "model-inconsistency"


class NotBigNef(SurfposError):
    code = "not-big-nef"


class PointInNegLocus(SurfposError):
    code = "point-in-neg-locus"


class NotBig(SurfposError):
    code = "not-big"


class NotNef(SurfposError):
    code = "not-nef"


class NotAmple(SurfposError):
    code = "not-ample"


class FlagCurveReenters(SurfposError):
    code = "flag-curve-reenters"


class OutOfRange(SurfposError):
    code = "out-of-range"


class InvalidQuery(SurfposError):
    code = "invalid-query"


class NonIntegralInput(SurfposError):
    code = "non-integral-input"


class MissingCanonical(SurfposError):
    code = "missing-canonical"


class InconsistentMultiplicities(SurfposError):
    code = "inconsistent-multiplicities"


class UnknownModel(SurfposError):
    code = "unknown-model"


class SchemaError(SurfposError):
    code = "schema-error"


class InvariantViolation(SurfposError):
    code = "invariant-violation"

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class ParseError(SurfposError):
    code = "parse-error"

    def __init__(self, offset: int, expected: str):
        self.offset = offset
        self.expected = expected
        super().__init__(f"parse error at offset {offset}: expected {expected}")


class UnknownSymbol(SurfposError):
    code = "unknown-symbol"

    def __init__(self, name: str, offset: int = -1):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown symbol {name!r}")
