"""Pointwise channel matrices and finite-dimensional channel discretisations."""

from .linalg import HermitianOperator, abs_operator, operator_inequality_gap, positive_projection
from .momentum import MomentumGrid, coulomb_matrix, hardy_remainder_matrix, power_diag, scalar_channel_matrix
from .pointwise import critical_gap, eta_minus, kato_weights, m_matrix
from .radial import (CoreElement, ExponentialPotential, RadialBasis, dirac_channel_matrix,
                     multiplier_matrix, potential_matrix)
from .transforms import TransformResult, hankel_channel, mellin_samples

__all__ = [
    "CoreElement", "ExponentialPotential", "HermitianOperator", "MomentumGrid", "RadialBasis",
    "TransformResult", "abs_operator", "coulomb_matrix", "critical_gap", "dirac_channel_matrix",
    "eta_minus", "hankel_channel", "hardy_remainder_matrix", "kato_weights", "m_matrix",
    "mellin_samples", "multiplier_matrix", "operator_inequality_gap", "positive_projection",
    "potential_matrix", "power_diag", "scalar_channel_matrix",
]
