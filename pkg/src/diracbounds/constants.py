"""The explicit inequality constants and the scans that produce them.

Conventions: ``nu`` is the Coulomb coupling in [0, 1/2], ``lam`` the power of
the fractional Laplacian in the critical lower bound, ``gamma`` the Riesz
exponent.  Functions are pure; the expensive ones are memoised.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from .channels.pointwise import eta_minus
from .errors import ComputationError, ConfigurationError, DomainError
from .symbols import alpha_crit, beta, check_channel, check_coupling, check_spinor_channel, v_imag


class EndpointWarning(UserWarning):
    """Raised (as a warning) when a constant is requested at an excluded endpoint."""


@dataclass(frozen=True)
class ScanConfig:
    """Log-spaced scan over s in [s_min, s_max] on both sides of 0.

    ``n_points`` per side is doubled until two successive infima differ by less
    than ``refine_tol`` (at most ``max_doublings`` times).
    """

    s_max: float = 1e3
    n_points: int = 4000
    refine_tol: float = 1e-9
    s_min: float = 1e-8
    max_doublings: int = 6

    def __post_init__(self):
        if not (self.s_min > 0):
            raise ConfigurationError("scan grid must stay away from s = 0 (s_min > 0)")
        if not (self.s_max > self.s_min):
            raise ConfigurationError("need s_max > s_min")
        if self.n_points < 2:
            raise ConfigurationError("n_points must be >= 2")
        if not (self.refine_tol > 0):
            raise ConfigurationError("refine_tol must be > 0")

    def grid(self, n: int | None = None) -> np.ndarray:
        half = np.logspace(math.log10(self.s_min), math.log10(self.s_max), n or self.n_points)
        return np.concatenate([-half[::-1], half])


@dataclass(frozen=True)
class EtaScan:
    eta: float
    argmin: float
    n_points: int
    closed_form: float


@dataclass
class ConstantBundle:
    nu: float
    b_star: float | None
    eta: float | None
    c_nu: float
    clr: float | None
    lt: dict = field(default_factory=dict)
    k_lambda: dict = field(default_factory=dict)


# ------------------------------------------------------------ non-critical


def noncritical_b(nu) -> float:
    """b*(nu) = nu (3 sqrt(16 + nu^2) - 5 nu) / 8."""
    nu = float(nu)
    if not (0.0 < nu <= 0.5):
        raise DomainError(f"noncritical_b: nu={nu!r} outside (0, 1/2]")
    return nu * (3.0 * math.sqrt(16.0 + nu * nu) - 5.0 * nu) / 8.0


def a_minus(nu, kappa, b, s):
    """Smaller eigenvalue a_- of the non-critical channel matrix; broadcasts over s."""
    nu = float(nu)
    kappa = check_spinor_channel(kappa)
    s = np.asarray(s, dtype=float)
    k2 = kappa * kappa
    out = (nu * nu + b / 4 + k2 * b + s * s * b
           - np.sqrt(4 * k2 * nu * nu + 4 * nu * nu * s * s + k2 * b * b))
    return out if out.ndim else float(out)


# ------------------------------------------------------------ critical eta


def eta_closed_form_candidate(nu) -> float:
    """The s -> 0 limit of the smaller determinant root, as a closed expression in V_{+-1/2}(i beta)."""
    nu = check_coupling(nu, allow_zero=False)
    b = beta(nu)
    vm = v_imag(-0.5, b)
    vp = v_imag(0.5, b)
    denom = (1.0 - 1.0 / vp) ** 2
    x = (nu * nu + 1.0) / denom + nu * nu * vm * vm
    z = 4.0 * nu ** 4 * vm * vm / denom
    return 0.5 * (x - math.sqrt(x * x - z))


@lru_cache(maxsize=256)
def eta_scan(nu, cfg: ScanConfig = ScanConfig()) -> EtaScan:
    """Infimum over s != 0 of the smaller determinant root, with grid doubling."""
    nu = check_coupling(nu, allow_zero=False)
    n = cfg.n_points
    prev = None
    for _ in range(cfg.max_doublings + 1):
        s = cfg.grid(n)
        roots = eta_minus(nu, s)
        i = int(np.argmin(roots))
        cur = float(roots[i])
        if prev is not None and abs(cur - prev) < cfg.refine_tol:
            break
        prev = cur
        n *= 2
    else:
        warnings.warn(f"eta scan for nu={nu} did not settle to {cfg.refine_tol:g}", RuntimeWarning)
    return EtaScan(cur, float(s[i]), n, eta_closed_form_candidate(nu))


def eta_lower_bound(nu, cfg: ScanConfig = ScanConfig()) -> float:
    """eta_nu: the largest eta keeping M^*M - eta diag(K_-, K_+) PSD on the scan grid."""
    return eta_scan(nu, cfg).eta


def determinant_coefficients(nu, eta):
    """(A, B, C) of the quadratic-in-s^2 lower bound for the determinant at coupling eta."""
    nu = check_coupling(nu, allow_zero=False)
    v = v_imag(0.5, beta(nu))
    eta = np.asarray(eta, dtype=float)
    n2, n4 = nu * nu, nu ** 4
    v2, v4 = v * v, v ** 4
    a = v2 * (1 - eta) ** 2
    b = (v2 * (1 - 2 * n2) - (1 + 2 * v2 + 2 * n2 * v2 + n4 * v4) * eta
         + (1 + v2 + n4 * v4) * eta ** 2)
    c = n4 * v2 - n2 * (1 + v2 + n2 * v4 + n4 * v4) * eta + n4 * v2 * (1 + v2) * eta ** 2
    return a, b, c


def coefficient_positivity_limit(nu) -> float:
    """Supremum of eta' such that A, B, C > 0 on [0, eta')."""
    nu = check_coupling(nu, allow_zero=False)
    v = v_imag(0.5, beta(nu))
    n2, n4, v2, v4 = nu * nu, nu ** 4, v * v, v ** 4
    polys = [
        [n4 * v2 * (1 + v2), -n2 * (1 + v2 + n2 * v4 + n4 * v4), n4 * v2],
        [1 + v2 + n4 * v4, -(1 + 2 * v2 + 2 * n2 * v2 + n4 * v4), v2 * (1 - 2 * n2)],
    ]
    limit = 1.0  # A vanishes at eta = 1
    for p in polys:
        for r in np.roots(p):
            if abs(r.imag) < 1e-14 and r.real > 0:
                limit = min(limit, float(r.real))
    return limit


# ------------------------------------------------------------ C_nu, CLR, LT


def c_nu(nu, cfg: ScanConfig = ScanConfig()) -> float:
    """C_nu in |D^nu| >= C_nu sqrt(-Delta).

    nu = 0 returns 1 (the free case is an identity); nu = 1/2 returns 0 with
    an :class:`EndpointWarning`.
    """
    nu = check_coupling(nu)
    if nu == 0.0:
        return 1.0
    if nu == 0.5:
        warnings.warn("C_nu vanishes at the critical coupling nu = 1/2", EndpointWarning)
        return 0.0
    b = beta(nu)
    root_eta = math.sqrt(eta_lower_bound(nu, cfg))
    first = root_eta * (1.0 - v_imag(-0.5, 0.0) / v_imag(-0.5, b))
    second = root_eta * (1.0 - v_imag(0.5, 0.0) / v_imag(0.5, b))
    third = math.sqrt(1.0 - noncritical_b(nu))
    return min(first, second, third)


def clr_constant(nu, cfg: ScanConfig = ScanConfig()) -> float:
    """C^CLR_nu = 4 / (pi C_nu^2); undefined at nu = 1/2."""
    nu = check_coupling(nu)
    if nu >= 0.5:
        raise DomainError("the CLR bound cannot hold at nu = 1/2")
    return 4.0 / (math.pi * c_nu(nu, cfg) ** 2)


def frac_clr_constant(t) -> float:
    """CLR coefficient for (-Delta)^t - V in two dimensions: (4 pi t)^-1 (1-t)^((t-2)/t)."""
    t = float(t)
    if not (0.0 < t < 1.0):
        raise DomainError(f"frac_clr_constant: t={t!r} outside (0, 1)")
    return (1.0 - t) ** ((t - 2.0) / t) / (4.0 * math.pi * t)


# ------------------------------------------------------------ K_{m,lambda}


def _log_interp_max(a: float, lam: float, eps: float) -> float:
    # log max_{x>0} (x^a - eps x^lam) for 0 < a < lam; the maximiser is (a/(eps lam))^{1/(lam-a)}
    return a / (lam - a) * math.log(a / (eps * lam)) + math.log1p(-a / lam)


def _interp_max(a: float, lam: float, eps: float) -> float:
    return math.exp(_log_interp_max(a, lam, eps))


def _v_differences(m: int, lam: float):
    j = abs(m) - 0.5
    v0 = v_imag(j, 0.0)
    v1 = v_imag(j, lam - 1.0)
    v2 = v_imag(j, 2.0 * (lam - 1.0))
    return v1 - v0, v2 - v1, v2


def _log_k_eps(lam, alpha, d1, d2, d3, le1, le2):
    e1, e2 = math.exp(le1), math.exp(le2)
    a = alpha * (d1 - e1 * d2 - e2 * d3)
    if a <= 0:
        return -math.inf
    return math.log(a) + (lam - 1.0) * _log_b(lam, alpha, d2, d3, e1, e2)


def _log_b(lam, alpha, d2, d3, e1, e2):
    terms = [_log_interp_max(3 * lam - 2, lam, e2) + math.log(d3)]
    if d2 > 0:
        terms.append(_log_interp_max(2 * lam - 1, lam, e1) + math.log(d2))
    return math.log(alpha) + float(np.logaddexp.reduce(terms))


def _optimise_eps(lam, alpha, d1, d2, d3):
    """Coordinate-wise bounded maximisation of log(A B^{lam-1}) over log eps_1, log eps_2."""
    hi1 = math.log(d1 / d2) if d2 > 0 else 0.0
    hi2 = math.log(d1 / d3)
    le1, le2 = hi1 - 2.0, hi2 - 2.0
    best = _log_k_eps(lam, alpha, d1, d2, d3, le1, le2)
    for _ in range(60):
        r1 = optimize.minimize_scalar(
            lambda x: -_log_k_eps(lam, alpha, d1, d2, d3, x, le2),
            bounds=(hi1 - 60.0, hi1), method="bounded", options={"xatol": 1e-12})
        le1 = r1.x
        r2 = optimize.minimize_scalar(
            lambda x: -_log_k_eps(lam, alpha, d1, d2, d3, le1, x),
            bounds=(hi2 - 60.0, hi2), method="bounded", options={"xatol": 1e-12})
        le2 = r2.x
        cur = -r2.fun
        if abs(cur - best) < 1e-13:
            best = cur
            break
        best = cur
    return best, math.exp(le1), math.exp(le2)


@dataclass(frozen=True)
class KOptimum:
    value: float
    lam: float
    lam_prime: float
    eps1: float
    eps2: float
    a: float
    log_b: float


def _k_upper_range(m: int, lam: float) -> KOptimum:
    # lam in (3/4, 1): direct epsilon optimisation
    alpha = alpha_crit(m)
    d1, d2, d3 = _v_differences(m, lam)
    if not d1 > 0:
        raise ComputationError(f"k_m_lambda: d1={d1} not positive for m={m}, lambda={lam}")
    log_k, e1, e2 = _optimise_eps(lam, alpha, d1, d2, d3)
    if not math.isfinite(log_k):
        raise ComputationError(f"k_m_lambda: no admissible (eps1, eps2) with A > 0 for m={m}, lambda={lam}")
    a = alpha * (d1 - e1 * d2 - e2 * d3)
    return KOptimum(math.exp(log_k), lam, lam, e1, e2, a, _log_b(lam, alpha, d2, d3, e1, e2))


def _k_lower_range(m: int, lam: float) -> KOptimum:
    # lam <= 3/4: pass through lam' in (3/4, 1) with C_3 = max_x (x^lam - x^lam')
    def log_k(lp):
        opt = _k_upper_range(m, lp)
        c3 = _interp_max(lam, lp, 1.0)
        log_b = float(np.logaddexp(opt.log_b, math.log(opt.a * c3)))
        return math.log(opt.a) + (lam - 1.0) * log_b, opt

    res = optimize.minimize_scalar(lambda lp: -log_k(lp)[0], bounds=(0.75 + 1e-6, 1.0 - 1e-6),
                                   method="bounded", options={"xatol": 1e-10})
    val, opt = log_k(res.x)
    return KOptimum(math.exp(val), lam, float(res.x), opt.eps1, opt.eps2, opt.a, opt.log_b)


@lru_cache(maxsize=512)
def k_m_lambda_details(m: int, lam: float) -> KOptimum:
    m = check_channel(m)
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise DomainError(f"k_m_lambda: lambda={lam!r} outside (0, 1)")
    if lam > 0.75:
        return _k_upper_range(abs(m), lam)
    return _k_lower_range(abs(m), lam)


def k_m_lambda(m: int, lam: float) -> float:
    """K_{m,lambda} in p^1 - alpha_m q_m >= K l^{lambda-1} p^lambda - l^{-1} p^0."""
    return k_m_lambda_details(int(m), float(lam)).value


def k_lambda(lam: float, cfg: ScanConfig = ScanConfig()) -> float:
    """K_lambda in |D^{1/2}| >= K_lambda l^{lambda-1} (-Delta)^{lambda/2} - l^{-1}."""
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise DomainError(f"k_lambda: lambda={lam!r} outside (0, 1)")
    eta_pow = eta_lower_bound(0.5, cfg) ** (lam / 2)
    third = (lam ** -lam * (1 - lam) ** (lam - 1) * 2 ** (-2.5 * lam)
             * (37.0 - 3.0 * math.sqrt(65.0)) ** (lam / 2))
    return min(eta_pow * k_m_lambda(0, lam), eta_pow * k_m_lambda(1, lam), third)


def lt_critical_integrand(lam: float, gamma: float, cfg: ScanConfig = ScanConfig()) -> float:
    """C^LT_{1/2,gamma}(lam, sigma(lam)) with sigma(lam) = 2(1-lam)/(lam gamma)."""
    sigma = 2.0 * (1.0 - lam) / (lam * gamma)
    kl = k_lambda(lam, cfg)
    log_val = (math.log(gamma) + (1 - 4 / lam) * math.log(1 - lam / 2)
               + math.lgamma(2 + gamma - 2 / lam) + math.lgamma(1 + 2 / lam)
               - math.log(2 * math.pi * lam) - (2 / lam) * math.log(kl) - math.lgamma(3 + gamma)
               + (2 - 2 / lam) * math.log(sigma) + (-gamma - 2 + 2 / lam) * math.log(1 - sigma))
    return math.exp(log_val)


@lru_cache(maxsize=256)
def lt_critical_optimum(gamma: float, cfg: ScanConfig = ScanConfig()) -> tuple[float, float]:
    """(C^LT_{1/2,gamma}, minimising lambda) via coarse grid plus bounded refinement."""
    lo = 2.0 / (2.0 + gamma)
    pad = 1e-6
    grid = np.linspace(lo + pad, 1.0 - pad, 41)
    vals = [lt_critical_integrand(x, gamma, cfg) for x in grid]
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(lambda x: lt_critical_integrand(x, gamma, cfg), bounds=(a, b),
                                   method="bounded", options={"xatol": 1e-9})
    if res.fun <= vals[i]:
        return float(res.fun), float(res.x)
    return float(vals[i]), float(grid[i])


def lt_constant(nu, gamma, cfg: ScanConfig = ScanConfig()) -> float:
    """C^LT_{nu,gamma}: 2 C^CLR/((gamma+1)(gamma+2)) below 1/2, optimised formula at 1/2."""
    nu = check_coupling(nu)
    gamma = float(gamma)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise DomainError(f"lt_constant: gamma={gamma!r} must be > 0")
    if nu < 0.5:
        return 2.0 * clr_constant(nu, cfg) / ((gamma + 1.0) * (gamma + 2.0))
    return lt_critical_optimum(gamma, cfg)[0]


def constant_bundle(nu, gammas=(), lambdas=(), cfg: ScanConfig = ScanConfig()) -> ConstantBundle:
    """Every constant attached to one coupling, as used by the report layer."""
    nu = check_coupling(nu)
    critical = nu == 0.5
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EndpointWarning)
        bundle = ConstantBundle(
            nu=nu,
            b_star=noncritical_b(nu) if nu > 0 else 0.0,
            eta=eta_lower_bound(nu, cfg) if nu > 0 else None,
            c_nu=c_nu(nu, cfg),
            clr=None if critical else clr_constant(nu, cfg),
        )
    for g in gammas:
        bundle.lt[float(g)] = lt_constant(nu, g, cfg)
    for lam in lambdas:
        bundle.k_lambda[float(lam)] = k_lambda(lam, cfg)
    return bundle
