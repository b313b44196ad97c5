"""Exception hierarchy. Every library error is a ``TropcapError`` (a ``ValueError``)."""


class TropcapError(ValueError):
    """Base class for invalid inputs and failed constructions."""

    kind = "error"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class DomainMismatchError(TropcapError):
    kind = "domain-mismatch"


class CapacityValidationError(TropcapError):
    kind = "capacity-validation"


class BoundaryViolation(CapacityValidationError):
    kind = "boundary-violation"


class RangeViolation(CapacityValidationError):
    kind = "range-violation"


class MonotonicityViolation(CapacityValidationError):
    """``c(A) > c(A | {x})``; ``smaller`` and ``larger`` are the witnessing bitmasks."""

    kind = "monotonicity-violation"

    def __init__(self, message, smaller, larger):
        super().__init__(message)
        self.smaller = smaller
        self.larger = larger

    def to_dict(self):
        d = super().to_dict()
        d["witness"] = [_bits(self.smaller), _bits(self.larger)]
        return d


class PreconditionViolation(TropcapError):
    kind = "precondition-violation"

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NonStabilizationError(TropcapError):
    """Reconstruction sweep reached the cap on ``M`` without converging."""

    kind = "non-stabilization"

    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures


class InvalidFunctionalError(TropcapError):
    kind = "invalid-functional"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _bits(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]
