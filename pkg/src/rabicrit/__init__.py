"""Critical dynamics of the quantum Rabi model probed by a dispersively
coupled auxiliary atom: exact, effective, variational, and closed-form
ground states, photon statistics, and the Loschmidt echo."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    LayoutError,
    PhaseDomainError,
    RabicritError,
    TruncationError,
)
from .hamiltonians import DisplacedFrame, ProbeParams, RabiParams
from .hilbert import FockCutoff, Operator, QuantumState

__all__ = [
    "ConvergenceError",
    "DimensionMismatchError",
    "DisplacedFrame",
    "FockCutoff",
    "LayoutError",
    "Operator",
    "PhaseDomainError",
    "ProbeParams",
    "QuantumState",
    "RabiParams",
    "RabicritError",
    "TruncationError",
    "__version__",
]
