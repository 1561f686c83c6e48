"""Complex special functions: log-Gamma, digamma, integer-order Bessel J and
the Legendre function of the second kind of half-integer order.

Everything here is vectorised over numpy arrays and free of global state.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
LN_SQRT_2PI = 0.91893853320467274178

# Lanczos coefficients for g = 671/128 (Numerical Recipes, 3rd ed., gammln).
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COF = np.array([
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
])

# B_{2k} / (2k) for the digamma asymptotic series.
_DIGAMMA_ASYM = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def check_half_integer_order(j: float) -> float:
    """Validate an order j in {-1/2, 1/2, 3/2, ...} and return it as a float."""
    two_j = 2.0 * float(j)
    if not math.isfinite(two_j) or two_j != round(two_j) or int(round(two_j)) % 2 == 0 or two_j < -1:
        raise DomainError(f"order j={j!r} is not in N_0 - 1/2")
    return float(j)


def _as_complex(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite complex argument")
    return z


def _gamma_poles(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _lanczos_lngamma(x: np.ndarray) -> np.ndarray:
    # valid for Re x >= 1/2, principal branch
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * np.log(tmp) - tmp
    ser = np.full_like(x, _LANCZOS_C0)
    for k, c in enumerate(_LANCZOS_COF):
        ser = ser + c / (x + (k + 1))
    return tmp + np.log(2.5066282746310005 * ser / x)


def ln_gamma(z):
    """Principal branch of log Gamma(z).

    Uses a Lanczos approximation on ``Re z >= 1/2`` and the recurrence
    ``Gamma(z) = Gamma(z + n) / (z (z+1) ... (z+n-1))`` to the left of it, which
    keeps the branch cut on the negative real axis.  Far to the left
    (``Re z < -1000``) the reflection formula is used instead and the result is
    only defined modulo ``2 pi i``.

    Raises :class:`DomainError` at the poles ``0, -1, -2, ...``.
    """
    z = _as_complex(z)
    poles = _gamma_poles(z)
    if np.any(poles):
        bad = z[poles].ravel()[0].real
        raise DomainError(f"ln_gamma: pole of Gamma at z={bad:g}")
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)

    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_lngamma(z[right])

    far = z.real < -1000.0
    if np.any(far):
        zf = z[far]
        out[far] = math.log(math.pi) - np.log(np.sin(np.pi * zf)) - _lanczos_lngamma(1.0 - zf)

    mid = ~right & ~far
    if np.any(mid):
        zm = z[mid]
        n = np.ceil(0.5 - zm.real).astype(int)
        acc = np.zeros_like(zm)
        for k in range(int(n.max())):
            active = k < n
            acc[active] += np.log(zm[active] + k)
        out[mid] = _lanczos_lngamma(zm + n) - acc

    return out[0] if scalar else out


def gamma(z):
    """Gamma(z) as ``exp(ln_gamma(z))``."""
    return np.exp(ln_gamma(z))


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z) for complex z off the poles."""
    z = _as_complex(z)
    poles = _gamma_poles(z)
    if np.any(poles):
        bad = z[poles].ravel()[0].real
        raise DomainError(f"digamma: pole at z={bad:g}")
    scalar = z.ndim == 0
    z = np.atleast_1d(z)

    left = z.real < 0.5
    w = np.where(left, 1.0 - z, z)
    n = np.ceil(np.maximum(0.0, 10.0 - w.real)).astype(int)
    acc = np.zeros_like(w)
    for k in range(int(n.max(initial=0))):
        active = k < n
        acc[active] += 1.0 / (w[active] + k)
    x = w + n
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    for c in reversed(_DIGAMMA_ASYM):
        series = (series + c) * inv2
    out = np.log(x) - 0.5 / x - series - acc
    if np.any(left):
        zl = z[left]
        out[left] = out[left] - np.pi / np.tan(np.pi * zl)
    return out[0] if scalar else out


# ---------------------------------------------------------------- Bessel J_m


def _bessel_series(m: int, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    term = np.ones_like(x)
    for k in range(1, m + 1):
        term = term * half / k
    total = term.copy()
    q = -half * half
    for k in range(1, 200):
        term = term * q / (k * (k + m))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _bessel_miller(m: int, x: np.ndarray) -> np.ndarray:
    # downward recurrence normalised by J_0 + 2 sum J_2k = 1
    xmax = float(np.max(x))
    top = int(max(m, xmax) + 30 + math.sqrt(40.0 * max(m, xmax)))
    top += top % 2
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    result = np.zeros_like(x)
    for k in range(top, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 == m:
            result = j_cur.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > 1e250
        if np.any(big):
            for arr in (j_cur, j_next, norm, result):
                arr[big] *= 1e-250
    norm += j_cur
    return result / norm


def _bessel_asymptotic(m: int, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * m * m
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 60):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 == 1 else term
        if np.all(np.abs(term) < 1e-17):
            break
    omega = x - (0.5 * m + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(omega) - q * np.sin(omega))


def bessel_j(m: int, x):
    """Bessel function J_m(x) of integer order m for real x.

    Power series for ``|x| <= 12``, Miller's downward recurrence above that,
    and the Hankel asymptotic expansion once ``|x| > 1000`` and ``m^2 < |x|/10``.
    """
    if int(m) != m:
        raise DomainError(f"bessel_j: order must be an integer, got {m!r}")
    m = int(m)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("bessel_j: non-finite argument")
    sign = 1.0
    if m < 0:
        m = -m
        sign = -1.0 if m % 2 else 1.0
    scalar = x.ndim == 0
    xa = np.atleast_1d(np.abs(x))
    # J_m(-x) = (-1)^m J_m(x)
    xsign = np.where((np.atleast_1d(x) < 0) & (m % 2 == 1), -1.0, 1.0)
    out = np.empty_like(xa)

    small = xa <= 12.0
    if np.any(small):
        out[small] = _bessel_series(m, xa[small])
    asym = (xa > 1000.0) & (m * m < xa / 10.0)
    if np.any(asym):
        out[asym] = _bessel_asymptotic(m, xa[asym])
    mid = ~small & ~asym
    if np.any(mid):
        out[mid] = _bessel_miller(m, xa[mid])

    out = sign * xsign * out
    return float(out[0]) if scalar else out


# ------------------------------------------------ Legendre Q of order |m|-1/2


def legendre_q_half(j: float, z: float) -> float:
    """Legendre function of the second kind Q_j(z) for j in N_0 - 1/2, z > 1.

    Evaluates ``2^{-j-1} int_{-1}^{1} (1-t^2)^j (z-t)^{-j-1} dt`` by adaptive
    quadrature after substituting ``t = cos(phi)``, which removes the endpoint
    singularity of ``(1-t^2)^{-1/2}``.  The integrand peaks at ``phi = 0`` with
    width ``sqrt(2(z-1))``; breakpoints are placed there.
    """
    j = check_half_integer_order(j)
    z = float(z)
    if not math.isfinite(z) or z <= 1.0:
        raise DomainError(f"legendre_q_half: need z > 1, got z={z!r}")
    a = 2.0 * j + 1.0
    b = -(j + 1.0)
    zm1 = z - 1.0

    def integrand(phi):
        # z - cos(phi) = (z - 1) + 2 sin^2(phi/2), free of cancellation near phi = 0
        return math.sin(phi) ** a * (zm1 + 2.0 * math.sin(0.5 * phi) ** 2) ** b

    width = math.sqrt(2.0 * zm1)
    points = sorted({p for p in (width, 4 * width, 16 * width, 64 * width) if p < math.pi})
    val, _ = integrate.quad(integrand, 0.0, math.pi, points=points or None,
                            epsabs=0.0, epsrel=1e-13, limit=400)
    return 2.0 ** (-j - 1.0) * val


def legendre_q_half_cosh(j: float, t):
    """Vectorised Q_j(cosh t) for t > 0, j in N_0 - 1/2.

    Uses ``Q_j(cosh t) = sqrt(pi) Gamma(j+1)/Gamma(j+3/2) e^{-(j+1)t}
    F(1/2, j+1; j+3/2; e^{-2t})``; the hypergeometric series is summed directly
    for ``e^{-2t} <= 1/2`` and through the logarithmic ``c = a + b`` connection
    formula otherwise.  This is the fast route used for kernel assembly; the
    quadrature route :func:`legendre_q_half` is the reference.
    """
    j = check_half_integer_order(j)
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise DomainError("legendre_q_half_cosh: need finite t > 0")
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    y = np.exp(-2.0 * t)
    a, b = 0.5, j + 1.0
    c = a + b
    out = np.empty_like(t)

    direct = y <= 0.5
    if np.any(direct):
        yd = y[direct]
        term = np.ones_like(yd)
        total = term.copy()
        for k in range(400):
            term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * yd
            total += term
            if np.all(term < 1e-17 * total):
                break
        pref = math.exp(0.5 * math.log(math.pi) + math.lgamma(b) - math.lgamma(c))
        out[direct] = pref * np.exp(-b * t[direct]) * total

    near = ~direct
    if np.any(near):
        tn = t[near]
        one_minus = -np.expm1(-2.0 * tn)
        log_one_minus = np.log(one_minus)
        psi_1 = -EULER_GAMMA
        psi_a = float(digamma(a).real)
        psi_b = float(digamma(b).real)
        coef = 1.0
        total = coef * (2 * psi_1 - psi_a - psi_b - log_one_minus)
        power = np.ones_like(tn)
        for k in range(1, 2000):
            coef *= (a + k - 1) * (b + k - 1) / (k * k)
            psi_1 += 1.0 / k
            psi_a += 1.0 / (a + k - 1)
            psi_b += 1.0 / (b + k - 1)
            power = power * one_minus
            term = coef * power * (2 * psi_1 - psi_a - psi_b - log_one_minus)
            total = total + term
            if k > 5 and np.all(np.abs(term) < 1e-17 * np.abs(total)):
                break
        # Gamma(c)/(Gamma(a)Gamma(b)) cancels the prefactor
        out[near] = np.exp(-b * tn) * total

    return float(out[0]) if scalar else out
