"""Exception hierarchy shared by all modules.

Two families matter for callers: plain ``PadicmfError`` subclasses signal
invalid input or impossible requests (CLI exit 1), while ``Inconclusive``
subclasses signal that the answer is not determined at the working precision
or truncation order (CLI exit 2).
"""


class PadicmfError(Exception):
    """Base class for all library errors."""


class InvalidInput(PadicmfError):
    """Malformed or schema-violating input document."""


class RingMismatch(PadicmfError):
    """Operands live over different rings or profiles."""


class InversionOfZero(PadicmfError):
    """Inverse requested of an element indistinguishable from zero."""


class PrecisionExhausted(PadicmfError):
    """A result would carry no significant p-adic digits."""


class HenselFailure(PadicmfError):
    """Defining polynomial is not separable (or not irreducible) mod p."""


class NotAUnit(PadicmfError):
    """Series inversion requested with a non-invertible constant term."""


class NotPrimitive(PadicmfError):
    """All coefficients are divisible by the uniformizer."""


class ZeroDeterminant(PadicmfError):
    """Frobenius determinant vanishes within truncation."""


class AutoModeUnsupported(PadicmfError):
    """Automatic subobject enumeration asked outside the supported shape."""


class NotNormalized(PadicmfError):
    """Filtration generator is not in the normalized (1, p*g1) form."""


class DeterminantNotUnit(PadicmfError):
    """2x2 system determinant is not invertible where it must be."""


class NegativeTDegree(PadicmfError):
    """theta applied to an element with a negative t-degree component."""


class TDegreeWindowExceeded(PadicmfError):
    """Product leaves the configured t-degree window."""


class IdentityFailure(PadicmfError):
    """A change-of-basis identity failed verification; message names it."""


class UnsupportedShape(PadicmfError):
    """Module outside the normalized family handled by the classifier."""


class Inconclusive(PadicmfError):
    """Verdict not determined at the current precision/truncation."""


class InconclusiveWeierstrass(Inconclusive):
    """No unit coefficient below the truncation order."""


class ZeroWithinTruncation(Inconclusive):
    """Series is zero modulo the truncation ideal; valuation undefined."""


class MembershipInconclusive(Inconclusive):
    """Span membership not decidable at the current precision."""


class RankUndetermined(Inconclusive):
    """Generator matrix rank not determined at the current precision."""
