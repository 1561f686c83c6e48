"""Mellin symbols of the channel transforms and the quantities built from them.

``xi(m, z)`` is the symbol that the order-|m| Hankel transform becomes after a
Mellin transform, ``v(j, z)`` is the symbol of the Coulomb potential in a
channel, and ``alpha_crit``/``zeta_root`` are the critical couplings and the
boundary parameter of the associated Friedrichs extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError
from .specfun import check_half_integer_order, ln_gamma

POLE_RADIUS = 1e-9


@dataclass(frozen=True)
class SymbolValue:
    """A symbol evaluated at one point together with its distance to the nearest pole."""

    value: complex
    pole_distance: float

    def __complex__(self) -> complex:
        return complex(self.value)

    @property
    def real(self) -> float:
        return float(self.value.real)


def check_channel(m) -> int:
    if int(m) != m:
        raise DomainError(f"channel index m={m!r} is not an integer")
    return int(m)


def check_spinor_channel(kappa) -> float:
    two_k = 2.0 * float(kappa)
    if not math.isfinite(two_k) or two_k != round(two_k) or int(round(two_k)) % 2 == 0:
        raise DomainError(f"spinor channel kappa={kappa!r} is not in Z + 1/2")
    return float(kappa)


def is_critical_channel(kappa) -> bool:
    return abs(check_spinor_channel(kappa)) == 0.5


def check_coupling(nu, *, allow_zero=True) -> float:
    nu = float(nu)
    lo_ok = nu >= 0 if allow_zero else nu > 0
    if not (math.isfinite(nu) and lo_ok and nu <= 0.5):
        raise DomainError(f"coupling nu={nu!r} outside {'[0' if allow_zero else '(0'}, 1/2]")
    return nu


def beta(nu) -> float:
    """sqrt(1/4 - nu^2); zero at the critical coupling."""
    nu = check_coupling(nu)
    return math.sqrt(max(0.25 - nu * nu, 0.0))


def _lattice_distance(z: np.ndarray, start: float, sign: float) -> np.ndarray:
    # distance from z to {i*sign*(start + 2n) : n >= 0}
    t = sign * z.imag
    n = np.maximum(np.round((t - start) / 2.0), 0.0)
    return np.abs(z - 1j * sign * (start + 2.0 * n))


def _check_poles(dist: np.ndarray, z: np.ndarray, what: str) -> None:
    bad = dist < POLE_RADIUS
    if np.any(bad):
        zb = complex(z[bad].ravel()[0])
        raise DomainError(f"{what}: z={zb} lies within {POLE_RADIUS:g} of a pole")


def xi_values(m: int, z):
    """Vectorised Xi_m(z); returns ``(values, pole_distance)``."""
    am = abs(check_channel(m))
    z = np.asarray(z, dtype=complex)
    dist = _lattice_distance(z, am + 1.0, -1.0)
    _check_poles(dist, z, f"xi(m={m})")
    iz = 1j * z
    log_val = (-1j * np.log(2.0)) * z + ln_gamma((am + 1 - iz) / 2) - ln_gamma((am + 1 + iz) / 2)
    return (-1j) ** am * np.exp(log_val), dist


def xi(m: int, z: complex) -> SymbolValue:
    """Xi_m(z) = (-i)^|m| 2^{-iz} Gamma((|m|+1-iz)/2) / Gamma((|m|+1+iz)/2).

    Unimodular on the real axis; poles at ``-i(1 + |m| + 2n)``.
    """
    val, dist = xi_values(m, complex(z))
    return SymbolValue(complex(val), float(dist))


def xi_inv(m: int, z: complex) -> SymbolValue:
    """conj(Xi_m(conj z)), the analytic continuation of 1/Xi_m off the real axis."""
    val, dist = xi_values(m, np.conj(complex(z)))
    return SymbolValue(complex(np.conj(val)), float(dist))


def v_values(j: float, z):
    """Vectorised V_j(z); returns ``(values, pole_distance)``.

    Poles sit at ``+-i(j + 1 + 2n)``.  The zeros ``+-i(j + 2 + 2n)`` are
    returned as exact zeros.
    """
    j = check_half_integer_order(j)
    z = np.asarray(z, dtype=complex)
    dist = np.minimum(_lattice_distance(z, j + 1.0, 1.0), _lattice_distance(z, j + 1.0, -1.0))
    _check_poles(dist, z, f"v(j={j})")
    zero = np.minimum(_lattice_distance(z, j + 2.0, 1.0), _lattice_distance(z, j + 2.0, -1.0)) == 0
    zs = np.where(zero, 0.0, z)
    iz = 1j * zs
    log_val = (ln_gamma((j + 1 + iz) / 2) + ln_gamma((j + 1 - iz) / 2)
               - ln_gamma((j + 2 + iz) / 2) - ln_gamma((j + 2 - iz) / 2))
    val = np.where(zero, 0.0, 0.5 * np.exp(log_val))
    return val, dist


def v(j: float, z: complex) -> SymbolValue:
    """V_j(z) = Gamma((j+1+iz)/2) Gamma((j+1-iz)/2) / (2 Gamma((j+2+iz)/2) Gamma((j+2-iz)/2))."""
    val, dist = v_values(j, complex(z))
    return SymbolValue(complex(val), float(dist))


def v_real(j: float, s):
    """V_j on the real axis (or on the imaginary axis inside the strip) as real floats."""
    val, _ = v_values(j, s)
    return np.real(val)


def v_imag(j: float, zeta: float) -> float:
    """V_j(i*zeta) for real zeta, as a real number."""
    return float(np.real(v_values(j, 1j * float(zeta))[0]))


def alpha_crit(m: int) -> float:
    """Critical coupling alpha_m = 1/V_{|m|-1/2}(0) = 2 Gamma^2((2|m|+3)/4) / Gamma^2((2|m|+1)/4)."""
    am = abs(check_channel(m))
    return 2.0 * math.exp(2.0 * (math.lgamma((2 * am + 3) / 4) - math.lgamma((2 * am + 1) / 4)))


def zeta_root(m: int, alpha: float) -> float:
    """The zeta in (-1/2, 0] solving 1 - alpha V_{|m|-1/2}(-i zeta) = 0.

    V_{|m|-1/2}(i y) increases on y in [0, 1/2), so the root is unique when it
    exists.  For m = 0 it exists for every alpha in (0, alpha_0]; for m != 0
    only for alpha in (1/V_{|m|-1/2}(i/2), alpha_m], because V stays finite
    at i/2 there.
    """
    m = check_channel(m)
    alpha = float(alpha)
    a_m = alpha_crit(m)
    if not (0.0 < alpha <= a_m * (1 + 1e-15)):
        raise DomainError(f"zeta_root: alpha={alpha!r} outside (0, alpha_{m}={a_m:.12g}]")
    j = abs(m) - 0.5
    if alpha >= a_m:
        return 0.0

    def f(zeta):
        return 1.0 - alpha * v_imag(j, -zeta)

    lo = -0.5 + 1e-9
    if f(lo) > 0:
        raise DomainError(
            f"zeta_root: no root in (-1/2, 0] for m={m}, alpha={alpha!r}; "
            f"need alpha > 1/V_{j}(i/2) = {1.0 / v_imag(j, 0.5):.12g}")
    # brentq is the bisection/secant hybrid; f is strictly monotone on the bracket
    return optimize.brentq(f, lo, 0.0, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
