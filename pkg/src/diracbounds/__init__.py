"""Constants, symbols and desk-scale checks for spectral inequalities of the 2D Coulomb-Dirac operator."""

from .errors import (ComputationError, ConfigurationError, DataError, DiracBoundsError, DomainError,
                     UsageError)

__version__ = "0.1.0"

__all__ = [
    "ComputationError", "ConfigurationError", "DataError", "DiracBoundsError", "DomainError",
    "UsageError", "__version__",
]
