"""Exception types and the diagnostic record shared across the package."""

from dataclasses import dataclass


class KunduNLSError(Exception):
    """Base class for all package-specific errors."""


class ContourEigenvalue(KunduNLSError):
    """Eigenvalue lies on the continuous spectrum (real axis or circle |z| = Q0)."""


class DuplicateEigenvalue(KunduNLSError):
    """Two eigenvalues coincide after canonicalization."""


class SingularMatrix(KunduNLSError):
    """A pivot underflowed during LU factorization."""


class NonSquareMatrix(KunduNLSError):
    """Operation requires a square matrix."""


class EvaluationAtPole(KunduNLSError):
    """Trace product evaluated at one of its poles."""


class DegenerateZero(KunduNLSError):
    """Second derivative of the denominator vanishes; not a double zero."""


class PeriodicIncompatible(KunduNLSError):
    """Field does not match at the ends of the periodic evolution window."""


class NonPowerOfTwo(KunduNLSError):
    """Spectral grid size must be a power of two."""


class StencilEvaluationFailure(KunduNLSError):
    """Field evaluation failed at a finite-difference stencil point."""


class ConfigParseError(KunduNLSError):
    """Configuration file is not valid JSON."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ConfigValidationError(KunduNLSError):
    """Configuration violates a structural or spectral invariant."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = list(diagnostics)


class NearSingularWarning(UserWarning):
    """Linear system condition estimate exceeded the warning threshold."""


@dataclass(frozen=True)
class Diagnostic:
    """One named check outcome, used by validation and the audit commands."""

    code: str
    message: str
    ok: bool = False
    value: float | None = None
    hint: str | None = None

    def to_dict(self):
        d = {"code": self.code, "message": self.message, "ok": self.ok}
        if self.value is not None:
            d["value"] = self.value
        if self.hint is not None:
            d["hint"] = self.hint
        return d
