"""Exception types raised across the package.

Every error carries a short machine-readable ``code`` that the CLI prints on
failure.
"""


class ApsatError(Exception):
    code = "error"


class InvalidProgression(ApsatError, ValueError):
    code = "invalid-progression"


class InvalidPair(ApsatError, ValueError):
    code = "invalid-pair"


class ModelViolation(ApsatError, ValueError):
    code = "model-violation"


class InvalidParameter(ApsatError, ValueError):
    code = "invalid-parameter"


class InvalidOverlap(ApsatError, ValueError):
    code = "invalid-overlap"


class UnsupportedK(ApsatError, ValueError):
    code = "unsupported-k"


class TooLarge(ApsatError, ValueError):
    code = "too-large"


class BudgetTooSmall(ApsatError, RuntimeError):
    code = "budget-too-small"


class InsufficientRange(ApsatError, ValueError):
    code = "insufficient-range"


class ParseError(ApsatError, ValueError):
    code = "parse-error"
