"""Galerkin discretisation of the scalar channel forms in momentum space.

Basis: on log-uniform cells [e_i, e_{i+1}) of (p_min, p_max) take
``b_i(p) = p^{-1} 1_cell(p) / sqrt(G_i)`` with ``G_i = int_cell p^{-2} dp``.
These are orthonormal in L^2(R_+, dp), the power forms ``int p^lam |f|^2 dp``
are diagonal, and the Coulomb form becomes a Toeplitz matrix because its
kernel depends on p/q only.  Every matrix is the exact restriction of the
continuous form to the span of the basis, so non-negativity is inherited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from ..errors import ConfigurationError, DomainError
from ..specfun import check_half_integer_order, legendre_q_half_cosh
from ..symbols import alpha_crit, check_channel
from .linalg import HermitianOperator


@dataclass(frozen=True)
class MomentumGrid:
    """Log-uniform cells in p; ``nodes`` are geometric cell centres, ``weights`` cell widths."""

    p_min: float = 1e-3
    p_max: float = 1e3
    n: int = 400

    def __post_init__(self):
        if not (0 < self.p_min < self.p_max and math.isfinite(self.p_max)):
            raise ConfigurationError("momentum grid needs 0 < p_min < p_max < inf")
        if self.n < 8:
            raise ConfigurationError("momentum grid needs at least 8 cells")

    @property
    def delta(self) -> float:
        return math.log(self.p_max / self.p_min) / self.n

    @property
    def edges(self) -> np.ndarray:
        return self.p_min * np.exp(self.delta * np.arange(self.n + 1))

    @property
    def nodes(self) -> np.ndarray:
        e = self.edges
        return np.sqrt(e[:-1] * e[1:])

    @property
    def weights(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def gram_diag(self) -> np.ndarray:
        e = self.edges
        return 1.0 / e[:-1] - 1.0 / e[1:]

    def refined(self, factor: int = 2) -> "MomentumGrid":
        return MomentumGrid(self.p_min, self.p_max, self.n * factor)

    def describe(self) -> tuple:
        return ("momentum-cells", self.p_min, self.p_max, self.n)


def power_diag(lam: float, grid: MomentumGrid) -> np.ndarray:
    """Diagonal of the form int p^lam |f|^2 dp in the orthonormal cell basis."""
    e = grid.edges
    k = lam - 1.0
    if k == 0.0:
        raw = np.full(grid.n, grid.delta)
    else:
        raw = (e[1:] ** k - e[:-1] ** k) / k
    return raw / grid.gram_diag


def _q_cosh_abs(j: float, x):
    return legendre_q_half_cosh(j, np.abs(x))


@lru_cache(maxsize=64)
def coulomb_toeplitz(j: float, delta: float, n: int) -> np.ndarray:
    """W_k = int_{-d}^{d} (d - |t|) Q_j(cosh(k d + t)) dt for k = 0..n-1 (d = cell width in log p).

    W_k is the double integral of Q_j(cosh(u - w)) over two cells k apart.
    k = 0 and k = 1 touch the logarithmic singularity at 0 and go through
    adaptive quadrature; the rest use Gauss-Legendre on each half.
    """
    j = check_half_integer_order(j)
    d = float(delta)
    w = np.empty(n)

    def f(t, k):
        return (d - abs(t)) * float(_q_cosh_abs(j, k * d + t))

    w[0] = 2.0 * integrate.quad(f, 0.0, d, args=(0,), epsabs=0, epsrel=1e-12, limit=200)[0]
    if n > 1:
        w[1] = (integrate.quad(f, -d, 0.0, args=(1,), epsabs=0, epsrel=1e-12, limit=200)[0]
                + integrate.quad(f, 0.0, d, args=(1,), epsabs=0, epsrel=1e-12, limit=200)[0])
    if n > 2:
        x, wt = np.polynomial.legendre.leggauss(12)
        k = np.arange(2, n)[:, None]
        total = np.zeros(n - 2)
        for lo in (-d, 0.0):
            t = lo + 0.5 * d * (x + 1.0)
            vals = (d - np.abs(t)) * _q_cosh_abs(j, k * d + t)
            total += 0.5 * d * (vals @ wt)
        w[2:] = total
    return w


def coulomb_matrix(m: int, grid: MomentumGrid) -> np.ndarray:
    """The form q_m (including the 1/pi) in the orthonormal cell basis."""
    j = abs(check_channel(m)) - 0.5
    w = coulomb_toeplitz(j, grid.delta, grid.n)
    idx = np.arange(grid.n)
    toeplitz = w[np.abs(idx[:, None] - idx[None, :])]
    s = 1.0 / np.sqrt(grid.gram_diag)
    return toeplitz * s[:, None] * s[None, :] / math.pi


def scalar_channel_matrix(m: int, alpha: float, grid: MomentumGrid = MomentumGrid(),
                          *, cell_average: bool = True) -> HermitianOperator:
    """p^1 - alpha q_m on the cell basis.

    Every kernel entry is a cell average (the kernel is log-singular on the
    diagonal for all m).  ``cell_average=False`` asks for point collocation,
    which is undefined there and raises :class:`ConfigurationError`.
    """
    m = check_channel(m)
    alpha = float(alpha)
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if not cell_average:
        raise ConfigurationError("point collocation hits Q(1) = inf on the diagonal; use cell averages")
    mat = np.diag(power_diag(1.0, grid))
    if alpha:
        mat = mat - alpha * coulomb_matrix(m, grid)
    return HermitianOperator(mat, None, {"basis": grid.describe(), "m": m, "alpha": alpha})


def hardy_remainder_matrix(m: int, lam: float, l: float, k: float,
                           grid: MomentumGrid = MomentumGrid()) -> HermitianOperator:
    """p^1 - alpha_m q_m - k l^{lam-1} p^lam + l^{-1} p^0."""
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise DomainError(f"lambda={lam!r} outside (0, 1)")
    if not (l > 0 and k >= 0):
        raise DomainError("need l > 0 and K >= 0")
    base = scalar_channel_matrix(m, alpha_crit(m), grid)
    diag = -k * l ** (lam - 1.0) * power_diag(lam, grid) + 1.0 / l
    op = base.with_matrix(base.matrix + np.diag(diag))
    op.meta.update(lam=lam, l=l, K=k)
    return op
