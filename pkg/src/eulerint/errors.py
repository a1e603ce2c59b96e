"""Exception types shared across the library."""


class EulerintError(Exception):
    """Base class for all library errors."""


class MalformedComplexError(EulerintError):
    """Cell data does not describe a finite regular complex."""


class MalformedSetError(EulerintError):
    """A definable set references cells outside its complex."""


class DomainMismatchError(EulerintError):
    """Two objects that must live over the same complex do not."""


class NotASubcomplexError(EulerintError):
    """A set that must be closed under faces is not."""


class SemicharacteristicUndefinedError(EulerintError):
    """Mod-2 Betti sum is odd, so half of it is not an integer."""


class IncompleteMapError(EulerintError):
    """A vertex map does not cover every source vertex."""


class InvariantViolationError(EulerintError):
    """Input data violates a declared invariant."""


class LedgerDataError(EulerintError):
    """A ledger lacks data required by a checker, or carries bad labels."""


class BrokenChainError(LedgerDataError):
    """An A_k stratum chain has a gap, so closures cannot be resolved."""


class UnknownTypeError(LedgerDataError):
    """A stratum label is not one of the known singularity types."""


class ResolutionExhaustedError(EulerintError):
    """Grid refinement hit its limit without resolving an ambiguity."""


class UnstableLevelError(EulerintError):
    """The requested level behaves badly on the box boundary."""


class InconclusiveError(EulerintError):
    """A numeric result failed its stability-under-refinement gate."""


class RadiusTooLargeError(EulerintError):
    """The map vanishes on the loop used for a degree computation."""


class UnreliableDegreeError(EulerintError):
    """Preimage counting did not stabilise; degree not trustworthy."""


class DegenerateDirectionError(EulerintError):
    """A height direction produced tied vertex heights or a non-Morse vertex."""


class DimensionError(EulerintError):
    """Input has the wrong dimension for the requested operation."""
