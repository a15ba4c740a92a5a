from typing import Optional, Tuple

# --------------------------------------------------------------------------
# Graph Exceptions
# --------------------------------------------------------------------------


class SignedGraphError(ValueError):
    """Base Exception for every signed graph related Error"""


class GraphParseError(SignedGraphError):
    """Raised when an edge-list document cannot be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class GraphValidationError(SignedGraphError):
    """Raised when graph contents violate the signed graph invariants"""


class DisconnectedGraphError(SignedGraphError):
    """Raised when an operation requires a connected (sub)graph"""


# --------------------------------------------------------------------------
# Hypothesis Exceptions
# --------------------------------------------------------------------------


class HypothesisError(SignedGraphError):
    """Raised when the precondition of an operation or inequality is not met"""

    def __init__(self, message: str, reason: str = "hypothesis-unmet"):
        super().__init__(message)
        self.reason = reason


class RepellingRangeError(HypothesisError):
    """Raised when epsilon is not below the consensus index"""

    def __init__(self, message: str, epsilon: float, consensus_index: Optional[float] = None):
        super().__init__(message, reason="epsilon-out-of-range")
        self.epsilon = epsilon
        self.consensus_index = consensus_index


class NegativeCycleAssumptionError(HypothesisError):
    """Raised when two distinct negative edges lie on a common cycle"""

    def __init__(self, message: str, edge_pair: Tuple[Tuple[int, int], Tuple[int, int]]):
        super().__init__(message, reason="negative-edges-share-cycle")
        self.edge_pair = edge_pair


# --------------------------------------------------------------------------
# Numerical Exceptions
# --------------------------------------------------------------------------


class NumericalError(SignedGraphError):
    """Raised when a numerical routine fails or two routes disagree"""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class NotSymmetricError(NumericalError):
    """Raised when a matrix expected to be symmetric is not"""


class ConvergenceError(NumericalError):
    """Raised when an iterative routine hits its iteration cap"""


class TransportError(SignedGraphError):
    """Raised when a transport problem is ill-posed (e.g. marginal mismatch)"""
