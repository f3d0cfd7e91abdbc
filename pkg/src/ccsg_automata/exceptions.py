"""Custom exceptions for the CCSG / cellular automata toolkit."""


class CcsgError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, details: dict | None = None):
        """Initialize CcsgError.

        Args:
            message: Error message
            details: Optional dictionary with additional error context
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} ({details_str})"
        return self.message


class ValidationError(CcsgError):
    """Raised when an argument value is outside its allowed range."""

    def __init__(self, message: str, field: str | None = None):
        """Initialize ValidationError.

        Args:
            message: Error message
            field: Name of the argument that failed validation
        """
        details = {"field": field} if field else {}
        super().__init__(message, details)
        self.field = field


class ParseError(CcsgError):
    """Raised when polynomial, bit, rule or tap text cannot be parsed."""

    def __init__(self, message: str, text: str, position: int | None = None):
        """Initialize ParseError.

        Args:
            message: Error message
            text: The offending input text
            position: Character offset of the first bad character, if known
        """
        details: dict[str, str | int] = {"text": repr(text)}
        if position is not None:
            details["position"] = position
        super().__init__(message, details)
        self.text = text
        self.position = position


class InvalidModulusError(CcsgError):
    """Raised when a modulus polynomial is zero or constant."""

    def __init__(self, modulus: str):
        super().__init__("Modulus must have degree >= 1", details={"modulus": modulus})
        self.modulus = modulus


class NotIrreducibleError(CcsgError):
    """Raised when an operation requires an irreducible polynomial."""

    def __init__(self, poly: str):
        super().__init__("Polynomial is not irreducible over GF(2)", details={"poly": poly})
        self.poly = poly


class NotPrimitiveError(CcsgError):
    """Raised when an operation requires a primitive polynomial."""

    def __init__(self, poly: str):
        super().__init__("Polynomial is not primitive over GF(2)", details={"poly": poly})
        self.poly = poly


class DegenerateExponentError(CcsgError):
    """Raised when an exponent is a multiple of the field's multiplicative order."""

    def __init__(self, exponent: int, order: int):
        super().__init__(
            f"Exponent {exponent} is 0 modulo {order}",
            details={"exponent": exponent, "order": order},
        )
        self.exponent = exponent
        self.order = order


class DegenerateStateError(CcsgError):
    """Raised when an all-zero register state is used where a cycle is required."""


class DegenerateControlError(CcsgError):
    """Raised when the control register can never select an output bit."""


class LengthMismatchError(CcsgError):
    """Raised when two sequences or a state and a rule string disagree in length."""

    def __init__(self, what: str, expected: int, found: int):
        super().__init__(
            f"Length mismatch for {what}",
            details={"expected": expected, "found": found},
        )
        self.expected = expected
        self.found = found


class NoPreimageError(CcsgError):
    """Raised when no CA initial state produces the requested output prefix."""

    def __init__(self, cell: int, rank: int, size: int):
        super().__init__(
            f"No initial state emits the requested prefix at cell {cell}",
            details={"cell": cell, "rank": rank, "size": size},
        )
        self.cell = cell
        self.rank = rank
        self.size = size


class SynthesisError(CcsgError):
    """Raised when no 90/150 cellular automaton can be synthesized."""


class InconsistencyError(CcsgError):
    """Raised when reconstructed bits contradict each other or the model."""

    def __init__(
        self,
        message: str,
        position: int | None = None,
        expected: int | None = None,
        found: int | None = None,
    ):
        """Initialize InconsistencyError.

        Args:
            message: Error message
            position: Absolute keystream position of the conflict
            expected: Bit already recorded at that position
            found: Bit that contradicts it
        """
        details: dict[str, int] = {}
        if position is not None:
            details["position"] = position
        if expected is not None:
            details["expected"] = expected
        if found is not None:
            details["found"] = found
        super().__init__(message, details)
        self.position = position
        self.expected = expected
        self.found = found
