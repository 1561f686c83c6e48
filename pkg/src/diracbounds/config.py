"""Run configuration for the command-line front end: one flat JSON document."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

from .errors import UsageError

VERIFY_SUITES = ("symbols", "couplings", "critical_channels", "noncritical_channels", "hardy", "abs_dirac")
COUNT_SUITES = ("fractional_clr", "dirac_clr_lt")

# multipliers applied to computed constants; 1.0 everywhere is the honest run
SCALE_KEYS = ("eta_scale", "b_star_scale", "c_nu_scale", "k_scale", "k_lambda_scale",
              "clr_scale", "lt_scale", "frac_clr_scale")


@dataclass
class RunConfig:
    checks: list | None = None

    # constants table
    nus: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    gammas: list = field(default_factory=lambda: [1.0])
    lambdas: list = field(default_factory=lambda: [0.5, 0.8, 0.9])
    ms: list = field(default_factory=lambda: [0, 1])
    m_max: int = 8

    # pointwise scans
    scan_points: int = 100_000
    s_min: float = 1e-4
    s_max: float = 1e3
    eta_tol: float = 1e-5
    noncritical_kappa_max: float = 7.5
    noncritical_points: int = 10_000
    seed: int = 20240611

    # discrete operator checks
    grid_n: int = 400
    p_min: float = 1e-3
    p_max: float = 1e3
    ls: list = field(default_factory=lambda: [0.1, 1.0, 10.0])
    abs_dirac_nus: list = field(default_factory=lambda: [0.1, 0.3, 0.45])
    abs_dirac_kappa_max: float = 3.5
    critical_lambda: float = 0.5
    critical_ls: list = field(default_factory=lambda: [0.5, 2.0])

    # counting
    ts: list = field(default_factory=lambda: [0.5])
    amplitudes: list = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0])
    gaussian_width: float = 1.0
    grid2d_n: int = 64
    grid2d_extent: float = 20.0
    dirac_nus: list = field(default_factory=lambda: [0.1, 0.3, 0.5])
    dirac_gammas: list = field(default_factory=lambda: [1.0])
    dirac_amplitudes: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 4.0])
    dirac_rate: float = 1.0
    dirac_kappa_max: float = 5.5
    dirac_grid_n: int = 400

    eta_scale: float = 1.0
    b_star_scale: float = 1.0
    c_nu_scale: float = 1.0
    k_scale: float = 1.0
    k_lambda_scale: float = 1.0
    clr_scale: float = 1.0
    lt_scale: float = 1.0
    frac_clr_scale: float = 1.0

    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def selected(self, available) -> list:
        if self.checks is None:
            return list(available)
        return [c for c in self.checks if c in available]

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise UsageError(msg)

        def reals(name, lo=-math.inf, hi=math.inf, lo_open=False, hi_open=False):
            vals = getattr(self, name)
            need(isinstance(vals, list), f"{name} must be a list")
            for v in vals:
                need(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v),
                     f"{name}: {v!r} is not a finite number")
                need(v > lo if lo_open else v >= lo, f"{name}: {v!r} below the admissible range")
                need(v < hi if hi_open else v <= hi, f"{name}: {v!r} above the admissible range")

        if self.checks is not None:
            need(isinstance(self.checks, list) and all(isinstance(c, str) for c in self.checks),
                 "checks must be a list of suite names")
            bad = sorted(set(self.checks) - set(VERIFY_SUITES) - set(COUNT_SUITES))
            need(not bad, f"unknown suites: {', '.join(bad)}; "
                          f"choose from {', '.join(VERIFY_SUITES + COUNT_SUITES)}")
        reals("nus", 0.0, 0.5, lo_open=True)              # couplings live in (0, 1/2]
        reals("abs_dirac_nus", 0.0, 0.5, hi_open=True)     # C_nu > 0 needs nu < 1/2
        reals("dirac_nus", 0.0, 0.5)
        reals("gammas", 0.0, lo_open=True)
        reals("dirac_gammas", 0.0, lo_open=True)
        reals("lambdas", 0.0, 1.0, lo_open=True, hi_open=True)
        reals("ls", 0.0, lo_open=True)
        reals("critical_ls", 0.0, lo_open=True)
        reals("ts", 0.0, 1.0, lo_open=True, hi_open=True)
        reals("amplitudes", 0.0)
        reals("dirac_amplitudes", 0.0)
        need(all(isinstance(m, int) and not isinstance(m, bool) for m in self.ms), "ms must be integers")
        need(isinstance(self.m_max, int) and 0 <= self.m_max <= 50, "m_max must be an integer in [0, 50]")
        need(0.0 < self.critical_lambda < 1.0, "critical_lambda must lie in (0, 1)")
        need(isinstance(self.scan_points, int) and self.scan_points >= 2, "scan_points must be >= 2")
        need(isinstance(self.noncritical_points, int) and self.noncritical_points >= 2, "noncritical_points must be >= 2")
        need(0 < self.s_min < self.s_max, "need 0 < s_min < s_max (the scans exclude s = 0)")
        need(self.eta_tol > 0, "eta_tol must be > 0")
        for name in ("grid_n", "dirac_grid_n"):
            need(isinstance(getattr(self, name), int) and getattr(self, name) >= 8, f"{name} must be an integer >= 8")
        need(0 < self.p_min < self.p_max, "need 0 < p_min < p_max")
        need(isinstance(self.grid2d_n, int) and self.grid2d_n >= 2 and self.grid2d_n % 2 == 0,
             "grid2d_n must be an even integer")
        need(self.grid2d_extent > 0 and self.gaussian_width > 0 and self.dirac_rate > 0,
             "grid2d_extent, gaussian_width and dirac_rate must be > 0")
        for name in ("abs_dirac_kappa_max", "dirac_kappa_max", "noncritical_kappa_max"):
            k = getattr(self, name)
            need(isinstance(k, (int, float)) and (2 * k) % 2 == 1 and k > 0,
                 f"{name} must be a positive half-odd integer")
        for name in SCALE_KEYS:
            v = getattr(self, name)
            need(isinstance(v, (int, float)) and v > 0 and math.isfinite(v), f"{name} must be a positive number")
        need(isinstance(self.workers, int) and self.workers >= 1, "workers must be a positive integer")
