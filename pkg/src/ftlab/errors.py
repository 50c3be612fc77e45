"""Exception types shared across the laboratory modules."""


class FtLabError(Exception):
    """Base class for all laboratory errors."""


class DimensionMismatch(FtLabError):
    """Matrix or operator dimensions disagree."""


class LengthMismatch(FtLabError):
    """A Pauli or bit-vector has the wrong length for its code."""


class CommutationViolation(FtLabError):
    """Parity-check matrices fail hx @ hz.T = 0 over GF(2)."""


class EnumerationTooLarge(FtLabError):
    """An exhaustive enumeration exceeds its configured cap."""


class ZeroOperator(FtLabError):
    """All coefficients of an operator expression vanish below tolerance."""


class EmptyCode(FtLabError):
    """The code has no stabilizer generators."""


class IndexOutOfRange(FtLabError):
    """A layer or wire index falls outside the circuit."""


class NonStochasticModel(FtLabError):
    """Fault sampling requested from a model without a stochastic instance."""


class DegenerateInput(FtLabError):
    """Truncation bound requested for n * delta = 0."""


class InvalidLocation(FtLabError):
    """A fault event references a location not present in the circuit."""


class TableTooLarge(FtLabError):
    """Lookup-decoder table would exceed the syndrome-space cap."""


class NotAPovm(FtLabError):
    """Measurement operators are not positive or do not sum to identity."""


class DimensionTooLarge(FtLabError):
    """Channel-distance bounds requested beyond the supported qubit count."""


class WeightPreconditionViolated(FtLabError):
    """Operator reduced weight is not below d_min / 2."""


class SizeLimit(FtLabError):
    """A statevector operation would exceed the wire-count limit."""


class StateNotNormalized(FtLabError):
    """A statevector input is not normalized to 1."""


class NoSuchCode(FtLabError):
    """No family member meets the requested rate at the required block size."""


class DegenerateEpsilon(FtLabError):
    """Resource accuracy parameter outside (0, 1) or log factor non-positive."""


class NotSequential(FtLabError):
    """Scheduling requires a sequentialized logical circuit."""


class ConfigError(FtLabError):
    """Invalid experiment configuration (CLI/service exit code 2)."""
