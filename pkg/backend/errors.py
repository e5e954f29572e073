class EntanglementError(Exception):
    """Base class for every error raised by the backend."""


class QuantumNumberError(EntanglementError, ValueError):
    """j, m, parity or atom count outside the allowed range."""


class SectorMismatchError(EntanglementError, ValueError):
    """A state and an operator live in different spin sectors."""


class DegenerateFrameError(EntanglementError):
    """The mean spin vanishes, so the rotated frame (and E) is undefined."""

    def __init__(self, magnitude: float, epsilon: float):
        self.magnitude = magnitude
        self.epsilon = epsilon
        super().__init__(
            f"Mean spin magnitude {magnitude:.3e} is not above {epsilon:.1e}; "
            "rotated frame is undefined"
        )


class ProductSpaceLimitError(EntanglementError, ValueError):
    """The tensor-product representation was asked for too many atoms."""


class SweepSpecError(EntanglementError, ValueError):
    """A sweep specification could not be parsed."""


def check_quantum_numbers(two_j: int, two_m: int) -> None:
    """Raise QuantumNumberError unless |m| <= j and 2m has the parity of 2j."""
    if two_j < 0:
        raise QuantumNumberError(f"2j must be nonnegative, got {two_j}")
    if abs(two_m) > two_j:
        raise QuantumNumberError(f"|m| exceeds j: 2m={two_m}, 2j={two_j}")
    if (two_j - two_m) % 2:
        raise QuantumNumberError(f"2m={two_m} has the wrong parity for 2j={two_j}")
