"""Galerkin matrices for the radial Dirac channels and for radial potentials.

A spinor channel kappa has components of Hankel order ``kappa - 1/2`` (upper)
and ``kappa + 1/2`` (lower).  After the unitary order-m Hankel transform
``(H_m f)(p) = int sqrt(pr) J_m(pr) f(r) dr`` the channel operator

    d = [[-nu/r, -d/dr - kappa/r], [d/dr - kappa/r, -nu/r]]

becomes ``[[-nu q_up, -p], [-p, -nu q_lo]]`` with q_m the Coulomb form of
channel m.  Both components are expanded in the momentum cell basis of
:mod:`.momentum`.  In the channels |kappa| = 1/2 with nu > 0 the cell span is
enlarged by the element ``psi = (nu, beta - kappa) r^beta e^{-r}``, which fixes
the self-adjoint realisation; ``d psi = (beta - kappa, -nu) r^beta e^{-r}`` is
again elementary, so every entry involving psi has a closed form or a smooth
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from ..errors import ConfigurationError, DataError, DomainError
from ..specfun import legendre_q_half_cosh
from ..symbols import check_coupling, check_spinor_channel, xi_values
from .linalg import HermitianOperator
from .momentum import MomentumGrid, coulomb_matrix, power_diag

CELL_NODES = 8
KERNEL_NODES = 5


def _order_sign(m: int) -> tuple[int, float]:
    # H_{-m} = (-1)^m H_m
    return abs(m), (-1.0) ** m if m < 0 else 1.0


def hankel_power_exp(m: int, b: float, rate: float, p):
    """H_m[r^b e^{-rate r}](p) in closed form (needs b + |m| + 3/2 > 0)."""
    am, sign = _order_sign(int(m))
    p = np.asarray(p, dtype=float) / rate
    a = 0.5 * (b + am + 1.5)
    pref = np.exp(special.gammaln(b + am + 1.5) - special.gammaln(am + 1.0)) * rate ** (-b - 1.0)
    return sign * pref * np.sqrt(p) * (0.5 * p) ** am * special.hyp2f1(a, a + 0.5, am + 1.0, -p * p)


@dataclass(frozen=True)
class CoreElement:
    """psi = (nu, beta - kappa) r^beta e^{-r} for a critical channel."""

    nu: float
    kappa: float

    @property
    def beta(self) -> float:
        return math.sqrt(max(self.kappa ** 2 - self.nu ** 2, 0.0))

    @property
    def orders(self) -> tuple[int, int]:
        return int(round(self.kappa - 0.5)), int(round(self.kappa + 0.5))

    @property
    def coef(self) -> tuple[float, float]:
        return self.nu, self.beta - self.kappa

    @property
    def d_coef(self) -> tuple[float, float]:
        """Coefficients of d psi, which has the same radial profile."""
        return self.beta - self.kappa, -self.nu

    def norm2(self) -> float:
        c1, c2 = self.coef
        return (c1 * c1 + c2 * c2) * math.gamma(2 * self.beta + 1) / 2 ** (2 * self.beta + 1)

    def hat(self, p, coef=None, rate: float = 1.0):
        """Hankel transforms of both components of coef * r^beta e^{-rate r}."""
        coef = self.coef if coef is None else coef
        return tuple(c * hankel_power_exp(m, self.beta, rate, p) for c, m in zip(coef, self.orders))

    def power_expectation(self, lam: float) -> float:
        """<psi, p^lam psi> through the Mellin picture (the integrand decays like exp(-pi|s|))."""
        b = self.beta
        if not lam < 1.0 + 2.0 * b:
            raise DomainError(f"core element has infinite p^{lam} energy (needs lam < {1 + 2 * b:g})")
        total = 0.0
        for c, m in zip(self.coef, self.orders):
            if c == 0.0:
                continue

            def f(s, m=m):
                xi_val, _ = xi_values(m, s + 0.5j * lam)
                g = special.loggamma(b + 0.5 - 0.5 * lam + 1j * s)
                return abs(xi_val) ** 2 * math.exp(2.0 * g.real) / (2.0 * math.pi)

            val = 0.0
            for lo, hi in ((-80.0, -5.0), (-5.0, 0.0), (0.0, 5.0), (5.0, 80.0)):
                val += integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-11, limit=200)[0]
            total += c * c * val
        return total


@dataclass(frozen=True)
class RadialBasis:
    """Spinor basis of one channel: momentum cells for each component, plus the
    core element whenever the channel needs it (``with_core=False`` drops it)."""

    grid: MomentumGrid = field(default_factory=MomentumGrid)
    with_core: bool = True

    def core_for(self, nu: float, kappa: float) -> CoreElement | None:
        nu = check_coupling(nu)
        kappa = check_spinor_channel(kappa)
        if abs(kappa) == 0.5 and nu > 0:
            if not self.with_core:
                raise ConfigurationError(
                    f"channel kappa={kappa:+g} at nu={nu:g} needs the core element; "
                    "without it the discretisation targets a different self-adjoint realisation")
            return CoreElement(nu, kappa)
        return None

    def size(self, nu: float, kappa: float) -> int:
        return 2 * self.grid.n + (self.core_for(nu, kappa) is not None)

    def refined(self, factor: int = 2) -> "RadialBasis":
        return RadialBasis(self.grid.refined(factor), self.with_core)


def _cell_nodes(grid: MomentumGrid, nodes: int = CELL_NODES):
    """Gauss-Legendre nodes/weights in u = log p on every cell, shape (n, nodes)."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    e = np.log(grid.edges)
    half = 0.5 * grid.delta
    u = (e[:-1, None] + half) + half * x[None, :]
    return np.exp(u), half * w


def _cell_projection(grid: MomentumGrid, values_fn, lam: float = 0.0) -> np.ndarray:
    """<b_i, p^lam g> = G_i^{-1/2} int_cell p^lam g(p) du."""
    p, w = _cell_nodes(grid)
    return ((p ** lam * values_fn(p)) @ w) / np.sqrt(grid.gram_diag)


def _bordered(diag_blocks, border, corner, with_border: bool) -> np.ndarray:
    n = diag_blocks[0][0].shape[0]
    size = 2 * n + with_border
    out = np.zeros((size, size))
    for a in range(2):
        for b in range(2):
            out[a * n:(a + 1) * n, b * n:(b + 1) * n] = diag_blocks[a][b]
    if with_border:
        out[:n, -1] = out[-1, :n] = border[0]
        out[n:2 * n, -1] = out[-1, n:2 * n] = border[1]
        out[-1, -1] = corner
    return out


class _Channel:
    """Shared pieces for all matrices of one (nu, kappa, basis)."""

    def __init__(self, nu, kappa, basis: RadialBasis):
        self.nu = check_coupling(nu)
        self.kappa = check_spinor_channel(kappa)
        self.basis = basis
        self.grid = basis.grid
        self.core = basis.core_for(self.nu, self.kappa)
        self.m_up = int(round(self.kappa - 0.5))
        self.m_lo = int(round(self.kappa + 0.5))
        n = self.grid.n
        if self.core is None:
            self.gram = None
        else:
            c = [_cell_projection(self.grid, lambda p, k=k: self.core.hat(p)[k]) for k in range(2)]
            eye = np.eye(n)
            self.gram = _bordered([[eye, np.zeros((n, n))], [np.zeros((n, n)), eye]],
                                  c, self.core.norm2(), True)
        self.meta = {"basis": ("dirac-channel", self.grid.describe(), self.nu, self.kappa,
                               self.core is not None),
                     "nu": self.nu, "kappa": self.kappa}

    def operator(self, blocks, border=None, corner=0.0) -> HermitianOperator:
        mat = _bordered(blocks, border, corner, self.core is not None)
        return HermitianOperator(mat, None if self.gram is None else self.gram.copy(), dict(self.meta))


def dirac_channel_matrix(nu, kappa, basis: RadialBasis = RadialBasis()) -> HermitianOperator:
    """Galerkin pencil (matrix, gram) of the channel operator d^nu_kappa."""
    ch = _Channel(nu, kappa, basis)
    g = ch.grid
    p = np.diag(power_diag(1.0, g))
    zero = np.zeros_like(p)
    q_up = coulomb_matrix(ch.m_up, g) if ch.nu else zero
    q_lo = coulomb_matrix(ch.m_lo, g) if ch.nu else zero
    blocks = [[-ch.nu * q_up, -p], [-p, -ch.nu * q_lo]]
    border = None
    if ch.core is not None:
        dc = ch.core.d_coef
        border = [_cell_projection(g, lambda x, k=k: ch.core.hat(x, dc)[k]) for k in range(2)]
    # <psi, d psi> = 0 because d psi is psi with the components swapped and one sign flipped
    return ch.operator(blocks, border, 0.0)


def multiplier_matrix(nu, kappa, lam: float, basis: RadialBasis = RadialBasis()) -> HermitianOperator:
    """The form of |p|^lam (i.e. (sqrt(-Delta))^lam) on the channel basis."""
    ch = _Channel(nu, kappa, basis)
    g = ch.grid
    d = np.diag(power_diag(lam, g))
    z = np.zeros_like(d)
    border, corner = None, 0.0
    if ch.core is not None:
        border = [_cell_projection(g, lambda x, k=k: ch.core.hat(x)[k], lam) for k in range(2)]
        corner = ch.core.power_expectation(lam)
    return ch.operator([[d, z], [z, d]], border, corner)


@dataclass(frozen=True)
class ExponentialPotential:
    """V(r) = sum_k c_k exp(-a_k r) with c_k >= 0, a_k > 0."""

    terms: tuple = ((1.0, 1.0),)

    def __post_init__(self):
        terms = tuple((float(c), float(a)) for c, a in self.terms)
        for c, a in terms:
            if not (c >= 0 and a > 0 and math.isfinite(c) and math.isfinite(a)):
                raise DataError(f"potential term ({c}, {a}) needs amplitude >= 0 and rate > 0")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, amplitude: float, rate: float = 1.0) -> "ExponentialPotential":
        return cls(((amplitude, rate),))

    def scaled(self, factor: float) -> "ExponentialPotential":
        return ExponentialPotential(tuple((factor * c, a) for c, a in self.terms))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return sum(c * np.exp(-a * r) for c, a in self.terms)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)

    def radial_moment(self, exponent: float) -> float:
        """2 pi int_0^inf V(r)^exponent r dr (the plane integral of V^exponent)."""
        live = [(c, a) for c, a in self.terms if c > 0]
        if not live:
            return 0.0
        if len(live) == 1:
            c, a = live[0]
            return 2.0 * math.pi * c ** exponent / (exponent * a) ** 2
        f = lambda r: self(r) ** exponent * r
        amin = min(a for _, a in live)
        return 2.0 * math.pi * integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-12, limit=400,
                                              points=None)[0] if amin > 0 else math.inf


def _lorentz(t):
    return 1.0 / (math.pi * (1.0 + t * t))


def _lorentz_inner(p, q1, q2):
    """int_{q1}^{q2} dq / (pi q (1 + (p - q)^2)) in closed form (partial fractions)."""
    def F(q):
        d = q - p
        return np.log(q) - 0.5 * np.log1p(d * d) + p * np.arctan(d)
    return (F(q2) - F(q1)) / (math.pi * (1.0 + p * p))


def _exp_kernel(j: float, p, q):
    """Kernel of multiplication by e^{-r} in Hankel order |m| = j + 1/2.

    K(p, q) = -Q'_j(z) / (pi p q) with z = (1 + p^2 + q^2) / (2pq), using
    Q'_j(z) = (j + 1)(Q_{j+1}(z) - z Q_j(z)) / (z^2 - 1).
    """
    w = (1.0 + (p - q) ** 2) / (2.0 * p * q)  # z - 1, computed without cancellation
    t = np.log1p(w + np.sqrt(w * (w + 2.0)))
    z = 1.0 + w
    dq = (j + 1.0) * (legendre_q_half_cosh(j + 1.0, t) - z * legendre_q_half_cosh(j, t)) / (w * (w + 2.0))
    return -dq / (math.pi * p * q)


@lru_cache(maxsize=64)
def _unit_rate_potential(am: int, p_min: float, p_max: float, n: int) -> np.ndarray:
    """Cell matrix of e^{-r} in order am for cells spanning [p_min, p_max].

    Near the diagonal the kernel approaches the Lorentzian 1/(pi(1 + (p-q)^2)),
    much narrower than the cells at large p; that part is integrated in closed
    form (inner) plus a composite rule (outer), the smooth rest by Gauss-Legendre.
    """
    grid = MomentumGrid(p_min, p_max, n)
    j = am - 0.5
    pn, wn = _cell_nodes(grid, KERNEL_NODES)
    pf, wf = pn.ravel(), np.tile(wn, n)
    kern = _exp_kernel(j, pf[:, None], pf[None, :]) * wf[:, None] * wf[None, :]
    raw = kern.reshape(n, KERNEL_NODES, n, KERNEL_NODES).sum(axis=(1, 3))

    lor = _lorentz(pf[:, None] - pf[None, :]) * wf[:, None] * wf[None, :]
    lor = lor.reshape(n, KERNEL_NODES, n, KERNEL_NODES).sum(axis=(1, 3))
    e = grid.edges
    x, w = np.polynomial.legendre.leggauss(8)
    for i in range(n):
        lo, hi = e[i], e[i + 1]
        pieces = max(1, int(math.ceil((hi - lo) / 0.25)))
        sub = np.linspace(lo, hi, pieces + 1)
        mid, half = 0.5 * (sub[1:] + sub[:-1]), 0.5 * np.diff(sub)
        pp = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        ww = (half[:, None] * w[None, :]).ravel() / pp
        for k in (i - 1, i, i + 1):
            if 0 <= k < n:
                exact = float(np.dot(ww, _lorentz_inner(pp, e[k], e[k + 1])))
                raw[i, k] += exact - lor[i, k]
    s = 1.0 / np.sqrt(grid.gram_diag)
    out = raw * s[:, None] * s[None, :]
    return 0.5 * (out + out.T)


def exponential_cell_matrix(m: int, rate: float, grid: MomentumGrid) -> np.ndarray:
    """Cell matrix of e^{-rate r} in order m; the rate is absorbed by rescaling the cells."""
    return _unit_rate_potential(abs(int(m)), grid.p_min / rate, grid.p_max / rate, grid.n)


def potential_matrix(nu, kappa, potential: ExponentialPotential,
                     basis: RadialBasis = RadialBasis()) -> HermitianOperator:
    """The form of the scalar radial V (same on both spinor components)."""
    ch = _Channel(nu, kappa, basis)
    g = ch.grid
    n = g.n
    up, lo = np.zeros((n, n)), np.zeros((n, n))
    border = [np.zeros(n), np.zeros(n)] if ch.core is not None else None
    corner = 0.0
    for c, a in potential.terms:
        if c == 0:
            continue
        up += c * exponential_cell_matrix(ch.m_up, a, g)
        lo += c * exponential_cell_matrix(ch.m_lo, a, g)
        if ch.core is not None:
            for k in range(2):
                border[k] += c * _cell_projection(
                    g, lambda x, k=k: ch.core.hat(x, rate=1.0 + a)[k])
            b = ch.core.beta
            corner += c * sum(cc * cc for cc in ch.core.coef) * math.gamma(2 * b + 1) / (2 + a) ** (2 * b + 1)
    z = np.zeros((n, n))
    return ch.operator([[up, z], [z, lo]], border, corner)
