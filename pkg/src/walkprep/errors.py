"""Exception types raised across the package."""


class WalkprepError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(WalkprepError):
    """Qubit counts or qubit indices are inconsistent."""


class StateValidationError(WalkprepError):
    """A state, gate body or serialized document violates its invariants."""


class InvalidWalkError(WalkprepError):
    """An edge walk connects a basis state to itself."""


class UnsupportedStepError(WalkprepError):
    """A walk step without fixed-time semantics was passed to the simulator."""


class InfeasibleFamilyError(WalkprepError):
    """A set family contains an empty member, so no hitting set exists."""


class ResourceLimitError(WalkprepError):
    """The requested instance exceeds the documented scale of an operation."""


class OrderCoverageError(WalkprepError):
    """A walk order does not cover exactly the target state's basis states."""


class DegenerateMergeError(WalkprepError):
    """Both amplitudes of a merge are zero; no transfer direction exists."""


class LoweringError(WalkprepError):
    """A gate was routed to the wrong lowering or a circuit is not lowered."""


class BenchVerificationError(WalkprepError):
    """A benchmark record failed exact fidelity verification.

    Carries the seed of the offending instance.
    """

    def __init__(self, message: str, seed: int):
        super().__init__(message)
        self.seed = seed


class QasmParseError(WalkprepError):
    """OpenQASM input could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
