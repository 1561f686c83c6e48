"""Verification suites: each returns a list of :class:`VerificationReport`.

The constants can be rescaled through the ``*_scale`` config keys, which is
how the negative controls corrupt them.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np

from . import constants as C
from .channels import linalg as L
from .channels.momentum import MomentumGrid, hardy_remainder_matrix
from .channels.pointwise import critical_gap
from .channels.radial import ExponentialPotential, RadialBasis, dirac_channel_matrix, multiplier_matrix
from .config import RunConfig
from .report import VerificationReport
from .spectra import Grid2D, MatrixPotential, clr_check, dirac_channel_clr_lt_check
from .symbols import alpha_crit, beta, v_real, v_values, xi_values

TOL_FLOOR = 1e-8


# ------------------------------------------------------------ discretisation tolerance


@lru_cache(maxsize=16)
def tolerance_constant(n: int, p_min: float, p_max: float) -> float:
    """c in tol(N) = c N^{-1/2}, calibrated on the free channel where |D_h| = p_h exactly."""
    basis = RadialBasis(MomentumGrid(p_min, p_max, n))
    d = L.abs_operator(dirac_channel_matrix(0.0, 0.5, basis))
    gap = L.operator_inequality_gap(d, multiplier_matrix(0.0, 0.5, 1.0, basis))
    return max(100.0 * abs(min(gap, 0.0)) * math.sqrt(n), TOL_FLOOR)


def tolerance(n: int, p_min: float = 1e-3, p_max: float = 1e3) -> float:
    return tolerance_constant(n, p_min, p_max) / math.sqrt(n)


def half_integers(kmax: float) -> list[float]:
    k = int(round(kmax + 0.5))
    return [j + 0.5 for j in range(-k, k)]


# ------------------------------------------------------------ symbols and couplings


def suite_symbols(cfg: RunConfig) -> list[VerificationReport]:
    rng = np.random.default_rng(cfg.seed)
    out = []
    s = np.linspace(-50, 50, 2001)
    worst = 0.0
    for m in range(cfg.m_max + 1):
        worst = max(worst, float(np.max(np.abs(np.abs(xi_values(m, s)[0]) - 1.0))))
    out.append(VerificationReport("symbols.xi_unimodular", {"m_max": cfg.m_max}, worst, 1e-12, "<="))

    z = rng.uniform(-5, 5, 200) + 1j * rng.uniform(-0.45, 0.45, 200)
    worst = 0.0
    for j in np.arange(-0.5, 5.0, 1.0):
        prod = (z * z + (j + 1) ** 2) * v_values(j, z)[0] * v_values(j + 1, z)[0]
        worst = max(worst, float(np.max(np.abs(prod - 1.0))))
    out.append(VerificationReport("symbols.v_reciprocity", {"j_max": 4.5, "points": 200}, worst, 1e-10, "<="))

    real = np.linspace(0, 30, 3001)
    imag = np.linspace(0, 0.49, 500)
    worst_r = worst_i = math.inf
    for j in np.arange(-0.5, 5.0, 1.0):
        worst_r = min(worst_r, float(np.min(-np.diff(v_real(j, real)))))
        worst_i = min(worst_i, float(np.min(np.diff(v_real(j, 1j * imag)))))
    out.append(VerificationReport("symbols.v_decreasing_real", {"j_max": 4.5}, worst_r, 0.0, ">="))
    out.append(VerificationReport("symbols.v_increasing_imag", {"j_max": 4.5}, worst_i, 0.0, ">="))
    return out


def suite_couplings(cfg: RunConfig) -> list[VerificationReport]:
    ref = 2.0 * math.gamma(0.75) ** 2 / math.gamma(0.25) ** 2
    out = [VerificationReport("couplings.alpha0", {}, abs(alpha_crit(0) - ref), 1e-12, "<=")]
    worst = 0.0
    for m in range(-cfg.m_max, cfg.m_max + 1):
        via_v = 1.0 / float(v_real(abs(m) - 0.5, 0.0))
        worst = max(worst, abs(via_v - alpha_crit(m)) / alpha_crit(m))
    out.append(VerificationReport("couplings.alpha_formulas", {"m_max": cfg.m_max}, worst, 1e-12, "<="))
    return out


# ------------------------------------------------------------ pointwise symbol checks


def _scan_grid(cfg: RunConfig) -> np.ndarray:
    return np.logspace(math.log10(cfg.s_min), math.log10(cfg.s_max), cfg.scan_points)


def suite_critical_channels(cfg: RunConfig) -> list[VerificationReport]:
    out = []
    s = _scan_grid(cfg)
    for nu in cfg.nus:
        scan = C.eta_scan(nu)
        eta = scan.eta * cfg.eta_scale
        worst, where = math.inf, None
        for sign in (1, -1):
            for side in (s, -s):
                g = critical_gap(nu, sign, side, eta)
                i = int(np.argmin(g))
                if g[i] < worst:
                    worst, where = float(g[i]), float(side[i])
        out.append(VerificationReport("critical_channels.gap", {"nu": nu, "eta": eta}, worst, -1e-9, ">=",
                                      tolerance=1e-9, extremal_point=where))
        out.append(VerificationReport("critical_channels.eta_closed_form", {"nu": nu},
                                      abs(scan.eta - scan.closed_form), cfg.eta_tol, "<=",
                                      extremal_point=scan.argmin))
    return out


def suite_noncritical(cfg: RunConfig) -> list[VerificationReport]:
    out = []
    s = np.concatenate([-np.logspace(-4, 3, cfg.noncritical_points // 2)[::-1], [0.0],
                        np.logspace(-4, 3, cfg.noncritical_points // 2)])
    kappas = [k for k in half_integers(cfg.noncritical_kappa_max) if abs(k) >= 1.5]
    for nu in cfg.nus:
        b = C.noncritical_b(nu) * cfg.b_star_scale
        worst, where = math.inf, None
        for k in kappas:
            a = C.a_minus(nu, k, b, s)
            i = int(np.argmin(a))
            if a[i] < worst:
                worst, where = float(a[i]), (k, float(s[i]))
        out.append(VerificationReport("noncritical_channels.a_minus", {"nu": nu, "b": b}, worst, -1e-9, ">=",
                                      tolerance=1e-9, extremal_point=list(where)))
    return out


# ------------------------------------------------------------ discrete operator checks


def suite_hardy(cfg: RunConfig) -> list[VerificationReport]:
    grid = MomentumGrid(cfg.p_min, cfg.p_max, cfg.grid_n)
    tol = tolerance(cfg.grid_n, cfg.p_min, cfg.p_max)
    out = []
    for m in cfg.ms:
        for lam in cfg.lambdas:
            k = C.k_m_lambda(m, lam) * cfg.k_scale
            for l in cfg.ls:
                e = hardy_remainder_matrix(m, lam, l, k, grid).smallest_eigenvalue()
                out.append(VerificationReport("hardy.remainder",
                                              {"m": m, "lambda": lam, "l": l, "K": k, "n": cfg.grid_n},
                                              e, -tol, ">=", tolerance=tol))
    return out


def abs_dirac_gap(nu, kappa, basis: RadialBasis, c: float) -> float:
    d = L.abs_operator(dirac_channel_matrix(nu, kappa, basis))
    return L.operator_inequality_gap(d, multiplier_matrix(nu, kappa, 1.0, basis) * c)


def critical_surrogate_gap(kappa, basis: RadialBasis, lam: float, k: float, l: float) -> float:
    """Smallest eigenvalue of |D_h| - (K l^{lam-1} p^lam - 1/l) at nu = 1/2."""
    d = L.abs_operator(dirac_channel_matrix(0.5, kappa, basis))
    rhs = multiplier_matrix(0.5, kappa, lam, basis) * (k * l ** (lam - 1.0)) - d.identity() * (1.0 / l)
    return L.operator_inequality_gap(d, rhs)


def suite_abs_dirac(cfg: RunConfig) -> list[VerificationReport]:
    basis = RadialBasis(MomentumGrid(cfg.p_min, cfg.p_max, cfg.grid_n))
    tol = tolerance(cfg.grid_n, cfg.p_min, cfg.p_max)
    out = []
    kappas = half_integers(cfg.abs_dirac_kappa_max)
    for nu in cfg.abs_dirac_nus:
        c = C.c_nu(nu) * cfg.c_nu_scale
        for kappa in kappas:
            gap = abs_dirac_gap(nu, kappa, basis, c)
            out.append(VerificationReport("abs_dirac.vs_momentum",
                                          {"nu": nu, "kappa": kappa, "C": c, "n": cfg.grid_n},
                                          gap, -tol, ">=", tolerance=tol))
    lam = cfg.critical_lambda
    k = C.k_lambda(lam) * cfg.k_lambda_scale
    for kappa in kappas:
        for l in cfg.critical_ls:
            gap = critical_surrogate_gap(kappa, basis, lam, k, l)
            out.append(VerificationReport("abs_dirac.critical_surrogate",
                                          {"kappa": kappa, "lambda": lam, "l": l, "K": k, "n": cfg.grid_n},
                                          gap, -tol, ">=", tolerance=tol))
    return out


# ------------------------------------------------------------ counting


def gaussian_potential(amplitude: float, width: float, grid: Grid2D) -> MatrixPotential:
    return MatrixPotential.from_function(
        lambda x, y: amplitude * np.exp(-(x * x + y * y) / (2 * width * width)), grid)


def suite_fractional_clr(cfg: RunConfig) -> list[VerificationReport]:
    grid = Grid2D(cfg.grid2d_n, cfg.grid2d_extent)
    out = []
    for t in cfg.ts:
        c = C.frac_clr_constant(t) * cfg.frac_clr_scale
        for a in cfg.amplitudes:
            r = clr_check(t, gaussian_potential(a, cfg.gaussian_width, grid), grid, constant=c)
            out.append(VerificationReport("count.fractional_clr",
                                          {"t": t, "amplitude": a, "n": grid.n, "extent": grid.extent},
                                          float(r.negative_count), r.bound, "<=",
                                          note=f"riesz_mean={r.riesz_mean:.6g}"))
    return out


def suite_dirac_clr_lt(cfg: RunConfig) -> list[VerificationReport]:
    basis = RadialBasis(MomentumGrid(cfg.p_min, cfg.p_max, cfg.dirac_grid_n))
    channels = half_integers(cfg.dirac_kappa_max)
    out = []
    for nu in cfg.dirac_nus:
        for gamma in cfg.dirac_gammas:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", C.EndpointWarning)
                clr = C.clr_constant(nu) * cfg.clr_scale if nu < 0.5 else None
                lt = C.lt_constant(nu, gamma) * cfg.lt_scale
            for a in cfg.dirac_amplitudes:
                pot = ExponentialPotential.single(a, cfg.dirac_rate)
                res = dirac_channel_clr_lt_check(nu, gamma, pot, channels, basis,
                                                 clr_override=clr, lt_override=lt, workers=cfg.workers)
                params = {"nu": nu, "gamma": gamma, "amplitude": a, "rate": cfg.dirac_rate,
                          "kappa_max": cfg.dirac_kappa_max, "n": cfg.dirac_grid_n}
                top = res.largest_contributing_channel
                note = f"largest contributing |kappa|={top}" if top is not None else "no bound states"
                if res.clr is not None:
                    out.append(VerificationReport("count.dirac_clr", params, res.clr.measured,
                                                  res.clr.bound, "<=", note=note))
                out.append(VerificationReport("count.dirac_lt", params, res.lt.measured,
                                              res.lt.bound, "<=", note=note))
    return out


VERIFY = {
    "symbols": suite_symbols,
    "couplings": suite_couplings,
    "critical_channels": suite_critical_channels,
    "noncritical_channels": suite_noncritical,
    "hardy": suite_hardy,
    "abs_dirac": suite_abs_dirac,
}

COUNT = {
    "fractional_clr": suite_fractional_clr,
    "dirac_clr_lt": suite_dirac_clr_lt,
}


# ------------------------------------------------------------ constants table


def constants_table(cfg: RunConfig) -> list[dict]:
    rows = []

    def add(q, params, value):
        rows.append({"quantity": q, "params": params, "value": value})

    for m in range(cfg.m_max + 1):
        add("alpha_m", {"m": m}, alpha_crit(m))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", C.EndpointWarning)
        for nu in cfg.nus:
            add("beta", {"nu": nu}, beta(nu))
            add("b_star", {"nu": nu}, C.noncritical_b(nu))
            add("eta", {"nu": nu}, C.eta_lower_bound(nu))
            add("eta_closed_form", {"nu": nu}, C.eta_closed_form_candidate(nu))
            add("c_nu", {"nu": nu}, C.c_nu(nu))
            add("clr", {"nu": nu}, C.clr_constant(nu) if nu < 0.5 else None)
            for g in cfg.gammas:
                add("lt", {"nu": nu, "gamma": g}, C.lt_constant(nu, g))
        for lam in cfg.lambdas:
            add("k_lambda", {"lambda": lam}, C.k_lambda(lam))
            for m in cfg.ms:
                add("k_m_lambda", {"m": m, "lambda": lam}, C.k_m_lambda(m, lam))
        for t in cfg.ts:
            add("frac_clr", {"t": t}, C.frac_clr_constant(t))
    return rows
