"""Negative-eigenvalue counts and Riesz means, and the CLR / Lieb-Thirring checks built on them."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import linalg

from .channels.linalg import HermitianOperator
from .channels.radial import (ExponentialPotential, RadialBasis, dirac_channel_matrix,
                              potential_matrix)
from .constants import ScanConfig, clr_constant, frac_clr_constant, lt_constant
from .errors import ComputationError, ConfigurationError, DataError, DomainError, UsageError
from .symbols import check_coupling, check_spinor_channel

MAX_DENSE = 8192
ZERO_RTOL = 1e-10


@dataclass(frozen=True)
class Grid2D:
    """Periodic n x n grid on [-L/2, L/2)^2."""

    n: int = 64
    extent: float = 20.0

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ConfigurationError(f"Grid2D needs an even n >= 2, got {self.n}")
        if not (self.extent > 0 and math.isfinite(self.extent)):
            raise ConfigurationError("Grid2D extent must be positive")

    @property
    def spacing(self) -> float:
        return self.extent / self.n

    @property
    def cell_area(self) -> float:
        return self.spacing ** 2

    @property
    def coords(self) -> np.ndarray:
        return -0.5 * self.extent + self.spacing * np.arange(self.n)

    @property
    def momenta(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def mesh(self):
        return np.meshgrid(self.coords, self.coords, indexing="ij")

    def momentum_modulus(self) -> np.ndarray:
        kx, ky = np.meshgrid(self.momenta, self.momenta, indexing="ij")
        return np.hypot(kx, ky)


@dataclass
class MatrixPotential:
    """Samples of a non-negative Hermitian potential.

    ``samples`` has shape (n, n) for a scalar field or (n, n, d, d) for a matrix
    field.  A scalar field stands for ``multiplicity`` identical components, so
    a scalar V acting on 2-spinors is ``MatrixPotential(v, multiplicity=2)``.
    """

    samples: np.ndarray
    multiplicity: int = 1

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim not in (2, 4) or (s.ndim == 4 and s.shape[2] != s.shape[3]):
            raise DataError(f"potential samples must have shape (n, n) or (n, n, d, d), got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise DataError("potential samples contain non-finite values")
        if s.ndim == 4:
            if np.max(np.abs(s - np.conj(np.swapaxes(s, 2, 3)))) > 1e-12 * max(np.max(np.abs(s)), 1.0):
                raise DataError("matrix potential samples are not Hermitian")
            s = 0.5 * (s + np.conj(np.swapaxes(s, 2, 3)))
        else:
            s = np.real(s).astype(float)
        self.samples = s
        if self.multiplicity < 1:
            raise DataError("multiplicity must be >= 1")

    @classmethod
    def from_function(cls, fn, grid: Grid2D, multiplicity: int = 1) -> "MatrixPotential":
        x, y = grid.mesh()
        return cls(np.asarray(fn(x, y), dtype=float), multiplicity)

    @property
    def is_scalar(self) -> bool:
        return self.samples.ndim == 2

    @property
    def components(self) -> int:
        return self.multiplicity if self.is_scalar else self.samples.shape[2]

    def eigenvalues(self) -> np.ndarray:
        """Pointwise eigenvalues, shape (n, n, components); raises DataError if not PSD."""
        if self.is_scalar:
            ev = np.repeat(self.samples[..., None], self.multiplicity, axis=-1)
        else:
            ev = np.linalg.eigvalsh(self.samples)
        scale = max(float(np.max(np.abs(ev))), 1.0)
        if np.min(ev) < -1e-12 * scale:
            raise DataError(f"potential sample is not positive semidefinite (eigenvalue {np.min(ev):.3g})")
        return np.clip(ev, 0.0, None)


@dataclass(frozen=True)
class SpectralReport:
    """measured <= bound is a pass; margin = bound - measured."""

    check: str
    measured: float
    bound: float
    negative_count: int
    riesz_mean: float
    params: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.bound - self.measured

    @property
    def passed(self) -> bool:
        return self.margin >= 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(margin=self.margin, passed=self.passed)
        return out


def trace_power(V: MatrixPotential, exponent: float, grid: Grid2D) -> float:
    """sum over sites of tr V(x)^exponent times the cell area."""
    if exponent < 1:
        raise DomainError(f"trace_power needs exponent >= 1, got {exponent}")
    return float(np.sum(V.eigenvalues() ** exponent) * grid.cell_area)


def _kinetic_matrix(t: float, grid: Grid2D) -> np.ndarray:
    """Dense matrix of the Fourier multiplier |p|^{2t} on the grid sites (row-major order).

    The operator is a 2D circulant, so it is assembled from one inverse FFT.
    """
    n = grid.n
    c = np.real(np.fft.ifft2(grid.momentum_modulus() ** (2 * t)))
    i = np.arange(n)
    d = (i[:, None] - i[None, :]) % n
    # T[(a,b),(c,e)] = c[(a-c) mod n, (b-e) mod n]
    return c[d[:, None, :, None], d[None, :, None, :]].reshape(n * n, n * n)


def _parity_basis(n: int):
    """Orthonormal even/odd combinations for the reflection k -> -k mod n (as sparse columns)."""
    from scipy import sparse

    rows, cols, vals = [], [], []
    even = [0] + list(range(1, n // 2)) + [n // 2]
    col = 0
    for k in even:
        partner = (-k) % n
        if partner == k:
            rows.append(k); cols.append(col); vals.append(1.0)
        else:
            r = 1.0 / math.sqrt(2.0)
            rows += [k, partner]; cols += [col, col]; vals += [r, r]
        col += 1
    n_even = col
    for k in range(1, n // 2):
        r = 1.0 / math.sqrt(2.0)
        rows += [k, n - k]; cols += [col, col]; vals += [r, -r]
        col += 1
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n)), n_even


def _drop_vector(h: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Compression of h to the orthogonal complement of the unit vector u (Householder)."""
    e = np.zeros_like(u)
    e[0] = 1.0
    w = u - e if u[0] <= 0 else u + e
    w /= np.linalg.norm(w)
    hw = h @ w
    # R h R with R = I - 2 w w^T, which maps u to -+e_0
    rhr = h - 2 * np.outer(w, hw) - 2 * np.outer(hw, w) + 4 * (w @ hw) * np.outer(w, w)
    return rhr[1:, 1:]


def _reflection_symmetric(v: np.ndarray) -> bool:
    n = v.shape[0]
    flip = (-np.arange(n)) % n
    scale = max(float(np.max(np.abs(v))), 1e-300)
    return (np.max(np.abs(v - v[flip, :])) <= 1e-13 * scale
            and np.max(np.abs(v - v[:, flip])) <= 1e-13 * scale)


def fractional_schrodinger_spectrum(t: float, V: MatrixPotential, grid: Grid2D, *,
                                    drop_zero_mode: bool = True) -> np.ndarray:
    """Eigenvalues of |p|^{2t} - V on the periodic grid.

    The constant function is an artefact of the torus (it has zero kinetic
    energy but is not normalisable in the plane) and binds for every V > 0;
    ``drop_zero_mode`` restricts to mean-zero functions, which by interlacing
    changes any count by at most one.  A scalar V symmetric under both
    reflections is solved in four parity blocks.
    """
    t = float(t)
    if not (0.0 < t < 1.0):
        raise DomainError(f"t={t!r} outside (0, 1)")
    if V.samples.shape[:2] != (grid.n, grid.n):
        raise DataError("potential samples do not match the grid")
    n = grid.n
    dim = 1 if V.is_scalar else V.components
    size = n * n * dim
    if size > MAX_DENSE:
        suggest = int(math.sqrt(MAX_DENSE / dim)) // 2 * 2
        raise ConfigurationError(f"dense problem of size {size} exceeds {MAX_DENSE}; use n <= {suggest}")
    kin = _kinetic_matrix(t, grid)
    try:
        if V.is_scalar:
            h = kin - np.diag(V.samples.ravel())
            if _reflection_symmetric(V.samples):
                ev = _parity_block_eigenvalues(h, n, drop_zero_mode)
            else:
                if drop_zero_mode:
                    h = _drop_vector(h, np.full(n * n, 1.0 / n))
                ev = linalg.eigvalsh(h)
            return np.sort(np.repeat(ev, V.multiplicity))
        h = np.kron(kin, np.eye(dim)).astype(complex)
        h -= linalg.block_diag(*V.samples.reshape(n * n, dim, dim))
        if drop_zero_mode:
            # remove the constant mode of every component
            consts = np.stack([np.tile(np.eye(dim)[k], n * n) / n for k in range(dim)])
            basis = linalg.null_space(consts)
            h = basis.conj().T @ h @ basis
        return linalg.eigvalsh(h)
    except linalg.LinAlgError as exc:
        raise ComputationError(f"eigensolve failed: {exc}") from exc


def _parity_block_eigenvalues(h: np.ndarray, n: int, drop_zero_mode: bool) -> np.ndarray:
    from scipy import sparse

    s1, n_even = _parity_basis(n)
    s2 = sparse.kron(s1, s1).tocsc()
    hs = (s2.T @ (s2.T @ h).T).T  # S^T h S, h symmetric
    out = []
    # columns of kron(S, S) are ordered (x-parity block, y-parity block)
    idx = np.arange(n * n).reshape(n, n)
    for px in range(2):
        xs = np.arange(n_even) if px == 0 else np.arange(n_even, n)
        for py in range(2):
            ys = np.arange(n_even) if py == 0 else np.arange(n_even, n)
            sel = idx[np.ix_(xs, ys)].ravel()
            block = hs[np.ix_(sel, sel)]
            if px == 0 and py == 0 and drop_zero_mode:
                u = np.asarray(s2.T @ np.full(n * n, 1.0 / n))[sel]
                block = _drop_vector(block, u / np.linalg.norm(u))
            out.append(linalg.eigvalsh(block))
    return np.sort(np.concatenate(out))


def _zero_eps(eigenvalues) -> float:
    ev = np.asarray(eigenvalues, dtype=float)
    return ZERO_RTOL * (float(np.max(np.abs(ev))) if ev.size else 0.0)


def count_negative(eigenvalues) -> int:
    ev = np.asarray(eigenvalues, dtype=float)
    return int(np.count_nonzero(ev < -_zero_eps(ev)))


def riesz_mean(eigenvalues, gamma: float) -> float:
    """sum of |lambda|^gamma over the eigenvalues counted by :func:`count_negative`."""
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    ev = np.asarray(eigenvalues, dtype=float)
    neg = ev[ev < -_zero_eps(ev)]
    return float(np.sum((-neg) ** gamma))


def clr_check(t: float, V: MatrixPotential, grid: Grid2D, *, constant: float | None = None) -> SpectralReport:
    """Negative count of |p|^{2t} - V against C(t) sum tr V^{1/t} cell."""
    ev = fractional_schrodinger_spectrum(t, V, grid)
    c = frac_clr_constant(t) if constant is None else float(constant)
    bound = c * trace_power(V, 1.0 / t, grid)
    count = count_negative(ev)
    return SpectralReport("fractional-clr", float(count), bound, count, riesz_mean(ev, 1.0),
                          {"t": t, "n": grid.n, "extent": grid.extent, "constant": c})


# ------------------------------------------------------------ Dirac channels


@dataclass(frozen=True)
class ChannelResult:
    kappa: float
    eigenvalues: np.ndarray

    @property
    def negative_count(self) -> int:
        return count_negative(self.eigenvalues)

    def riesz_mean(self, gamma: float) -> float:
        return riesz_mean(self.eigenvalues, gamma)


def positive_part_form(d: HermitianOperator, v: HermitianOperator) -> np.ndarray:
    """Matrix of P+ |D| P+ - P+ V P+ on ran P+, in the G-orthonormal eigenbasis of D."""
    evals, vecs = d.eigh()
    keep = evals >= 0
    x = vecs[:, keep]
    red = np.diag(evals[keep]) - x.conj().T @ v.matrix @ x
    return 0.5 * (red + red.conj().T)


def channel_spectrum(nu, kappa, potential: ExponentialPotential, basis: RadialBasis) -> ChannelResult:
    d = dirac_channel_matrix(nu, kappa, basis)
    v = potential_matrix(nu, kappa, potential, basis)
    red = positive_part_form(d, v)
    try:
        ev = linalg.eigvalsh(red)
    except linalg.LinAlgError as exc:
        raise ComputationError(f"eigensolve failed in channel {kappa}: {exc}") from exc
    return ChannelResult(float(kappa), ev)


def check_symmetric_channels(channels) -> list[float]:
    ks = sorted(check_spinor_channel(k) for k in channels)
    if sorted(-k for k in ks) != ks:
        raise UsageError(f"channel list {ks} is not symmetric under kappa -> -kappa")
    return ks


@dataclass(frozen=True)
class DiracCheck:
    clr: SpectralReport | None
    lt: SpectralReport
    channels: tuple

    @property
    def reports(self) -> list[SpectralReport]:
        return [r for r in (self.clr, self.lt) if r is not None]

    @property
    def largest_contributing_channel(self) -> float | None:
        hits = [abs(c.kappa) for c in self.channels if c.negative_count]
        return max(hits) if hits else None


def dirac_channel_clr_lt_check(nu, gamma: float, potential: ExponentialPotential, channels,
                               basis: RadialBasis = RadialBasis(), *, cfg: ScanConfig = ScanConfig(),
                               clr_override: float | None = None, lt_override: float | None = None,
                               workers: int = 1) -> DiracCheck:
    """Per-channel counts and Riesz means of P+(|D| - V)P+ against the CLR and LT bounds.

    ``V`` is scalar, so tr V^k = 2 V^k; the CLR part is skipped at nu = 1/2.
    """
    nu = check_coupling(nu)
    gamma = float(gamma)
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    ks = check_symmetric_channels(channels)

    def job(k):
        return channel_spectrum(nu, k, potential, basis)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = tuple(pool.map(job, ks))
    else:
        results = tuple(job(k) for k in ks)

    count = sum(r.negative_count for r in results)
    mean = sum(r.riesz_mean(gamma) for r in results)
    params = {"nu": nu, "gamma": gamma, "potential": [list(t) for t in potential.terms],
              "channels": ks, "n": basis.grid.n}
    clr = None
    if nu < 0.5:
        c = clr_constant(nu, cfg) if clr_override is None else float(clr_override)
        bound = c * 2.0 * potential.radial_moment(2.0)
        clr = SpectralReport("dirac-clr", float(count), bound, count, mean, {**params, "constant": c})
    c = lt_constant(nu, gamma, cfg) if lt_override is None else float(lt_override)
    bound = c * 2.0 * potential.radial_moment(2.0 + gamma)
    lt = SpectralReport("dirac-lt", mean, bound, count, mean, {**params, "constant": c})
    return DiracCheck(clr, lt, results)
