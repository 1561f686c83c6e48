"""Acceptance criteria AC1-AC10, each printed as one PASS/FAIL line in the summary.

Criteria that the computation genuinely cannot meet are left failing; the
measured numbers are in the failure message.
"""

import json
import math
import time

import mpmath as mp
import numpy as np
import pytest

from conftest import record
from diracbounds import cli
from diracbounds import constants as C
from diracbounds.channels.momentum import MomentumGrid, hardy_remainder_matrix
from diracbounds.channels.radial import RadialBasis
from diracbounds.config import RunConfig
from diracbounds.specfun import bessel_j, gamma, ln_gamma
from diracbounds import suites
from diracbounds.symbols import alpha_crit, v_imag, v_real, v_values, xi_values

NUS = [0.1, 0.2, 0.3, 0.4, 0.5]


def run_cli(tmp_path, command, cfg, name="cfg"):
    cfg_path = tmp_path / f"{name}.json"
    out_path = tmp_path / f"{name}.out.json"
    cfg_path.write_text(json.dumps(cfg))
    code = cli.main([command, "--config", str(cfg_path), "--out", str(out_path), "--no-timings"])
    doc = json.loads(out_path.read_text()) if out_path.exists() else None
    return code, doc


def failures(doc):
    return [c for c in doc["checks"] if c["status"] == "FAIL"]


# ------------------------------------------------------------------ AC1


def test_ac1_special_functions():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    z = rng.uniform(-10, 10, 100) + 1j * rng.uniform(-10, 10, 100)
    refl = np.max(np.abs(gamma(z) * gamma(1 - z) * np.sin(np.pi * z) / np.pi - 1))
    conj = np.max(np.abs(ln_gamma(np.conj(z)) - np.conj(ln_gamma(z))))
    half = abs(gamma(0.5) - math.sqrt(math.pi))
    x = np.linspace(-200, 200, 2001)
    bessel = all(np.array_equal(bessel_j(-m, x), (-1) ** m * bessel_j(m, x)) for m in range(12))
    elapsed = time.perf_counter() - t0
    ok = half < 1e-10 and refl < 1e-10 and conj < 1e-10 and bessel and elapsed < 1.0
    record("AC1", "specfun", ok, f"|G(1/2)-sqrt(pi)|={half:.1e} reflection={refl:.1e} "
                                 f"conjugation={conj:.1e} bessel_exact={bessel} t={elapsed:.2f}s")
    assert ok


# ------------------------------------------------------------------ AC2


def test_ac2_symbol_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    z = rng.uniform(-20, 20, 200) + 1j * rng.uniform(-0.45, 0.45, 200)
    worst_rec = 0.0
    for j in np.arange(-0.5, 5.0, 1.0):
        a, _ = v_values(j, z)
        b, _ = v_values(j + 1, z)
        worst_rec = max(worst_rec, float(np.max(np.abs((z * z + (j + 1) ** 2) * a * b - 1))))
    s = np.linspace(-500, 500, 20001)
    worst_unit = max(float(np.max(np.abs(np.abs(xi_values(m, s)[0]) - 1))) for m in range(9))
    sp = np.linspace(0.01, 20, 400)
    zeta = np.linspace(0.0, 0.49, 50)
    dec = all(np.all(np.diff(v_real(j, sp)) < 0) for j in np.arange(-0.5, 5.0, 1.0))
    inc = all(np.all(np.diff([v_imag(j, x) for x in zeta]) > 0) for j in np.arange(-0.5, 5.0, 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst_rec <= 1e-10 and worst_unit <= 1e-12 and dec and inc and elapsed < 5.0
    record("AC2", "symbols", ok, f"reciprocity={worst_rec:.1e} |Xi|-1={worst_unit:.1e} "
                                 f"decreasing={dec} increasing={inc} t={elapsed:.2f}s")
    assert ok


# ------------------------------------------------------------------ AC3


def test_ac3_critical_couplings():
    with mp.workdps(30):
        ref0 = float(2 * mp.gamma(0.75) ** 2 / mp.gamma(0.25) ** 2)
    d0 = abs(alpha_crit(0) - ref0)
    worst = max(abs(alpha_crit(m) - 1 / v_real(abs(m) - 0.5, 0.0)) / alpha_crit(m) for m in range(-8, 9))
    ok = d0 <= 1e-12 and worst <= 1e-12
    record("AC3", "couplings", ok, f"|alpha_0 - oracle|={d0:.1e} formulas agree to {worst:.1e}")
    assert ok


# ------------------------------------------------------------------ AC4


def test_ac4_pointwise_gap_and_eta():
    cfg = RunConfig(nus=NUS)
    t0 = time.perf_counter()
    reports = suites.suite_critical_channels(cfg)
    elapsed = time.perf_counter() - t0
    gaps = [r for r in reports if r.check_id == "critical_channels.gap"]
    closed = [r for r in reports if r.check_id == "critical_channels.eta_closed_form"]
    worst_gap = min(r.measured for r in gaps)
    worst_cf = max(r.measured for r in closed)
    ok = all(r.passed for r in reports) and cfg.scan_points == 100_000 and elapsed < 60
    record("AC4", "pointwise gap + eta", ok,
           f"min gap={worst_gap:.2e} (>= -1e-9) on 4x1e5 points, |eta_scan - closed form|<={worst_cf:.1e}, "
           f"t={elapsed:.1f}s")
    assert ok


def test_ac4_determinant_coefficients():
    details, ok = [], True
    for nu in NUS:
        eta = C.eta_lower_bound(nu)
        grid = np.linspace(0.0, 2 * eta - 1e-9, 20001)
        a, b, c = C.determinant_coefficients(nu, grid)
        good = bool(np.all(a > 0) and np.all(b > 0) and np.all(c > 0))
        ok &= good
        if not good:
            details.append(f"nu={nu}: positive only up to eta={C.coefficient_positivity_limit(nu):.4g} "
                           f"< 2 eta_nu={2 * eta:.4g}")
    record("AC4", "A,B,C > 0 on [0, 2 eta_nu)", ok, "; ".join(details) or "all positive")
    assert ok, "; ".join(details)


# ------------------------------------------------------------------ AC5


def test_ac5_noncritical_channels():
    cfg = RunConfig(nus=NUS)
    reports = suites.suite_noncritical(cfg)
    worst = min(r.measured for r in reports)
    eq = abs(C.a_minus(0.5, 1.5, C.noncritical_b(0.5), 0.0))
    ok = all(r.passed for r in reports) and eq <= 1e-6 and cfg.noncritical_points == 10_000
    record("AC5", "a_minus >= 0", ok, f"min a_minus={worst:.3e}, equality residual at (1/2, 3/2, 0)={eq:.1e}")
    assert ok


# ------------------------------------------------------------------ AC6


def test_ac6_hardy_remainder():
    cfg = RunConfig()
    reports = suites.suite_hardy(cfg)
    worst = min(reports, key=lambda r: r.measured)
    ok = all(r.passed for r in reports) and len(reports) == 18
    # refinement clause: any negative gap must shrink at least 2x at N = 800
    negative = [r for r in reports if r.measured < 0]
    refine = []
    fine = MomentumGrid(cfg.p_min, cfg.p_max, 800)
    for r in negative:
        p = r.params
        g800 = hardy_remainder_matrix(p["m"], p["lambda"], p["l"], p["K"], fine).smallest_eigenvalue()
        refine.append(g800 >= 0 or abs(g800) <= 0.5 * abs(r.measured))
    ok &= all(refine)
    record("AC6", "hardy remainder", ok,
           f"min eigenvalue={worst.measured:.3e} at {worst.params}; tol(400)={suites.tolerance(400):.1e}; "
           f"negative gaps={len(negative)}")
    assert ok


# ------------------------------------------------------------------ AC7


def test_ac7_abs_dirac_lower_bound():
    cfg = RunConfig()
    reports = suites.suite_abs_dirac(cfg)
    ok = all(r.passed for r in reports)
    sub = [r for r in reports if r.check_id == "abs_dirac.vs_momentum"]
    crit = [r for r in reports if r.check_id == "abs_dirac.critical_surrogate"]
    # refinement on the tightest channel of every coupling
    fine = RadialBasis(MomentumGrid(cfg.p_min, cfg.p_max, 800))
    tol800 = suites.tolerance(800)
    lines = []
    for nu in cfg.abs_dirac_nus:
        r = min((x for x in sub if x.params["nu"] == nu), key=lambda x: x.measured)
        g800 = suites.abs_dirac_gap(nu, r.params["kappa"], fine, r.params["C"])
        improving = g800 >= -tol800 and min(g800, 0.0) >= min(r.measured, 0.0) - tol800
        ok &= improving
        lines.append(f"nu={nu} kappa={r.params['kappa']:+g}: {r.measured:.3e} -> {g800:.3e}")
    r = min(crit, key=lambda x: x.measured)
    g800 = suites.critical_surrogate_gap(r.params["kappa"], fine, r.params["lambda"], r.params["K"], r.params["l"])
    ok &= g800 >= -tol800
    lines.append(f"nu=1/2 surrogate: {r.measured:.3e} -> {g800:.3e}")
    record("AC7", "|D| >= C_nu p", ok, f"{len(reports)} channel checks; refinement 400->800: " + ", ".join(lines))
    assert ok


# ------------------------------------------------------------------ AC8


def test_ac8_fractional_clr():
    cfg = RunConfig()
    t0 = time.perf_counter()
    reports = suites.suite_fractional_clr(cfg)
    elapsed = time.perf_counter() - t0
    counts = [int(r.measured) for r in reports]
    ok = (all(r.passed for r in reports) and counts[0] == 0 and max(counts) >= 20
          and len(reports) == 8 and elapsed < 300)
    pairs = ", ".join(f"{int(r.measured)}<={r.bound:.4g}" for r in reports)
    record("AC8", "fractional CLR t=1/2", ok, f"counts vs bounds: {pairs}; t={elapsed:.0f}s")
    assert ok


# ------------------------------------------------------------------ AC9


def test_ac9_dirac_clr_lt():
    cfg = RunConfig(dirac_nus=[0.1, 0.3, 0.5], dirac_gammas=[1.0], dirac_amplitudes=[0.5, 1.0, 2.0, 4.0],
                    dirac_kappa_max=5.5)
    reports = suites.suite_dirac_clr_lt(cfg)
    clr = [r for r in reports if r.check_id == "count.dirac_clr"]
    lt = [r for r in reports if r.check_id == "count.dirac_lt"]
    crit = [r for r in lt if r.params["nu"] == 0.5]
    ok = all(r.passed for r in reports) and len(clr) == 8 and len(lt) == 12 and len(crit) == 4
    worst = min(reports, key=lambda r: r.margin / max(r.bound, 1e-300))
    record("AC9", "Dirac CLR/LT", ok,
           f"max count={max(r.measured for r in clr):g}, smallest relative margin "
           f"{worst.margin / worst.bound:.4f} ({worst.check_id}, {worst.params})")
    assert ok


# ------------------------------------------------------------------ AC10

# suite that consumes each constant, and the corruption that makes the claim stronger
CONTROLS = {
    "eta_scale": ("verify", "critical_channels", "critical_channels.gap", 10.0),
    "b_star_scale": ("verify", "noncritical_channels", "noncritical_channels.a_minus", 0.1),
    "c_nu_scale": ("verify", "abs_dirac", "abs_dirac.vs_momentum", 10.0),
    "k_scale": ("verify", "hardy", "hardy.remainder", 10.0),
    "k_lambda_scale": ("verify", "abs_dirac", "abs_dirac.critical_surrogate", 10.0),
    "clr_scale": ("count", "dirac_clr_lt", "count.dirac_clr", 0.1),
    "lt_scale": ("count", "dirac_clr_lt", "count.dirac_lt", 0.1),
    "frac_clr_scale": ("count", "fractional_clr", "count.fractional_clr", 0.1),
}


def tightest(checks):
    """The check closest to failing: smallest value for lower bounds, largest measured/bound otherwise."""
    if checks[0]["sense"] == ">=":
        return min(checks, key=lambda c: c["measured"])
    return max((c for c in checks if c["bound"] > 0), key=lambda c: c["measured"] / c["bound"])


def test_ac10_exit_codes(tmp_path):
    ok_code, _ = run_cli(tmp_path, "verify", {"checks": ["symbols", "couplings"]}, "pass")
    usage_code, _ = run_cli(tmp_path, "verify", {"no_such_key": 1}, "usage")
    fail_code, doc = run_cli(tmp_path, "verify", {"checks": ["critical_channels"], "nus": [0.3],
                                                 "eta_scale": 10.0}, "fail")
    ok = ok_code == 0 and usage_code == 2 and fail_code == 1 and failures(doc)
    record("AC10", "exit codes", ok, f"pass={ok_code} usage={usage_code} fail={fail_code}")
    assert ok


@pytest.mark.parametrize("key", list(CONTROLS))
def test_ac10_negative_control(tmp_path, key):
    command, suite, check_id, factor = CONTROLS[key]
    cfg = {"checks": [suite], key: factor}
    if suite == "abs_dirac" and key == "k_lambda_scale":
        # only the critical surrogate uses K_lambda; skip the sub-critical couplings' cost
        cfg["abs_dirac_nus"] = [0.1]
    code, doc = run_cli(tmp_path, command, cfg, key)
    bad = failures(doc)
    ok = code == 1 and len(bad) > 0
    if ok:
        detail = f"{key}x{factor:g}: {len(bad)} FAIL in {suite}, exit {code}"
    else:
        tight = tightest([c for c in doc["checks"] if c["check_id"] == check_id])
        detail = (f"{key}x{factor:g}: no FAIL in {suite} (exit {code}); the constant is not sharp on the "
                  f"desk-scale problem, tightest {check_id}: measured={tight['measured']:.4g} "
                  f"{tight['sense']} bound={tight['bound']:.4g}")
    record("AC10", key, ok, detail)
    assert ok, detail
