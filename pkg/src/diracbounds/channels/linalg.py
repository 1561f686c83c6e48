"""Dense Hermitian operators with an optional Gram matrix, and their spectral calculus."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from ..errors import ComputationError, UsageError

HERMITIAN_RTOL = 1e-12


@dataclass
class HermitianOperator:
    """Matrix of a quadratic form in some basis.

    ``gram`` is the overlap matrix of that basis (``None`` means orthonormal).
    ``meta`` describes the basis; two operators can only be combined when their
    ``meta['basis']`` entries agree.
    """

    matrix: np.ndarray
    gram: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise UsageError(f"operator matrix must be square, got shape {a.shape}")
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        if scale > 0 and float(np.max(np.abs(a - a.conj().T))) > HERMITIAN_RTOL * scale:
            raise UsageError("operator matrix is not Hermitian")
        self.matrix = 0.5 * (a + a.conj().T)
        if self.gram is not None:
            g = np.asarray(self.gram)
            if g.shape != a.shape:
                raise UsageError("gram matrix shape does not match the operator")
            self.gram = 0.5 * (g + g.conj().T)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def basis(self):
        return self.meta.get("basis")

    def with_matrix(self, matrix) -> "HermitianOperator":
        return HermitianOperator(matrix, self.gram, dict(self.meta))

    def __add__(self, other):
        _check_compatible(self, other)
        return self.with_matrix(self.matrix + other.matrix)

    def __sub__(self, other):
        _check_compatible(self, other)
        return self.with_matrix(self.matrix - other.matrix)

    def __mul__(self, c):
        return self.with_matrix(float(c) * self.matrix)

    __rmul__ = __mul__

    def identity(self) -> "HermitianOperator":
        """The form <x, x> in this basis (the Gram matrix itself)."""
        g = np.eye(self.size) if self.gram is None else self.gram
        return self.with_matrix(g.copy())

    def eigh(self):
        """Generalised eigenpairs ``A v = e G v`` with ``v^H G v = 1``."""
        try:
            if self.gram is None:
                return linalg.eigh(self.matrix)
            return linalg.eigh(self.matrix, self.gram)
        except (linalg.LinAlgError, ValueError) as exc:
            raise ComputationError(f"eigen-decomposition failed: {exc}") from exc

    def eigvalsh(self) -> np.ndarray:
        try:
            if self.gram is None:
                return linalg.eigvalsh(self.matrix)
            return linalg.eigvalsh(self.matrix, self.gram)
        except (linalg.LinAlgError, ValueError) as exc:
            raise ComputationError(f"eigen-decomposition failed: {exc}") from exc

    def smallest_eigenvalue(self) -> float:
        return float(self.eigvalsh()[0])


def _check_compatible(a: HermitianOperator, b: HermitianOperator) -> None:
    if a.size != b.size or a.basis != b.basis:
        raise UsageError(f"operators live on different bases: {a.basis!r} vs {b.basis!r}")
    if (a.gram is None) != (b.gram is None):
        raise UsageError("one operator has a Gram matrix and the other does not")
    if a.gram is not None and not np.array_equal(a.gram, b.gram):
        raise UsageError("operators carry different Gram matrices")


def spectral_function(op: HermitianOperator, fn) -> HermitianOperator:
    """f(op) as a form in the same basis: G V f(E) V^H G."""
    evals, vecs = op.eigh()
    g_vecs = vecs if op.gram is None else op.gram @ vecs
    return op.with_matrix((g_vecs * fn(evals)) @ g_vecs.conj().T)


def abs_operator(op: HermitianOperator) -> HermitianOperator:
    """|op| via the spectral theorem (same eigenvectors, absolute eigenvalues)."""
    return spectral_function(op, np.abs)


def positive_projection(op: HermitianOperator):
    """Eigenvectors (G-orthonormal columns) spanning the spectral subspace [0, inf)."""
    evals, vecs = op.eigh()
    keep = evals >= 0
    return evals[keep], vecs[:, keep]


def operator_inequality_gap(a: HermitianOperator, b: HermitianOperator) -> float:
    """Smallest generalised eigenvalue of a - b; non-negative iff a >= b on the basis span."""
    return (a - b).smallest_eigenvalue()
