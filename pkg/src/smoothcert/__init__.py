"""Randomized-smoothing certification under the maximal-relative Renyi framework.

Noise mechanisms, divergence calculus, the robust-radius solver, the
Monte-Carlo certification pipeline and mechanism assessment.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DataFormatError, DegenerateInputError, DivergenceUndefinedError, InvalidParameterError,
    ModelFormatError,
)
from .kernels import BACKEND  # noqa: E402
from .mechanisms import MechanismKind, NoiseMechanism  # noqa: E402
from .radius import ProbabilityPair, SupremumResult  # noqa: E402

__all__ = [
    "BACKEND", "DataFormatError", "DegenerateInputError", "DivergenceUndefinedError",
    "InvalidParameterError", "MechanismKind", "ModelFormatError", "NoiseMechanism",
    "ProbabilityPair", "SupremumResult", "__version__",
]
