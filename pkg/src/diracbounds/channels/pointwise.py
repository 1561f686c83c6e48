"""Pointwise 2x2 objects of the critical spinor channels kappa = +-1/2.

All functions accept scalar or array ``s`` and broadcast.  ``sign`` is +1 or -1
and selects M_+ or M_- = sigma_1 M_+ sigma_1.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..symbols import beta, check_coupling, v_imag, v_values


def _check_sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise DomainError(f"sign must be +1 or -1, got {sign!r}")


def _shifted_symbols(s):
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise DomainError("non-finite s")
    z = s + 0.5j
    return v_values(-0.5, z)[0], v_values(0.5, z)[0]


def m_matrix(nu, sign, s):
    """M_{+-}(s) = [[-nu V_{-+1/2}(s+i/2), 1], [1, -nu V_{+-1/2}(s+i/2)]].

    V_{-1/2} has a pole at i/2, so s = 0 raises :class:`DomainError`.
    """
    nu = check_coupling(nu)
    sign = _check_sign(sign)
    vm, vp = _shifted_symbols(s)
    first, second = (vm, vp) if sign == 1 else (vp, vm)
    out = np.empty(np.shape(vm) + (2, 2), dtype=complex)
    out[..., 0, 0] = -nu * first
    out[..., 0, 1] = 1.0
    out[..., 1, 0] = 1.0
    out[..., 1, 1] = -nu * second
    return out


def _weights(nu, vm, vp):
    b = beta(nu)
    k_minus = np.abs(1.0 - vm / v_imag(-0.5, b)) ** 2
    k_plus = np.abs(1.0 - vp / v_imag(0.5, b)) ** 2
    return k_minus, k_plus


def _nonzero(s):
    s = np.asarray(s, dtype=float)
    if np.any(s == 0):
        raise DomainError("s = 0 is excluded (K_- blows up like s^-2)")
    return s


def kato_weights(nu, sign, s):
    """(K_{-+}(s), K_{+-}(s)) with K_{+-}(s) = |1 - V_{+-1/2}(s+i/2)/V_{+-1/2}(i beta)|^2."""
    nu = check_coupling(nu, allow_zero=False)
    sign = _check_sign(sign)
    vm, vp = _shifted_symbols(_nonzero(s))
    k_minus, k_plus = _weights(nu, vm, vp)
    return (k_minus, k_plus) if sign == 1 else (k_plus, k_minus)


def _gram_entries(nu, vm, vp):
    # entries of M_+^* M_+ and |det M_+|^2 (the latter without cancellation)
    a11 = 1.0 + nu * nu * np.abs(vm) ** 2
    a22 = 1.0 + nu * nu * np.abs(vp) ** 2
    a12 = -nu * (np.conj(vm) + vp)
    det = np.abs(nu * nu * vm * vp - 1.0) ** 2
    return a11, a22, a12, det


def critical_gap(nu, sign, s, eta):
    """Smallest eigenvalue of M^* M - eta diag(K_{-+}, K_{+-}) at s != 0.

    The sign only permutes the basis, so the value does not depend on it.
    The small eigenvalue is taken as det/(larger eigenvalue) whenever the
    trace is positive, which avoids cancellation where K_- ~ s^-2 is large.
    """
    nu = check_coupling(nu, allow_zero=False)
    _check_sign(sign)
    if eta < 0:
        raise DomainError(f"eta must be >= 0, got {eta!r}")
    vm, vp = _shifted_symbols(_nonzero(s))
    k_minus, k_plus = _weights(nu, vm, vp)
    a11, a22, a12, _ = _gram_entries(nu, vm, vp)
    a = a11 - eta * k_minus
    d = a22 - eta * k_plus
    half = 0.5 * (a + d)
    rad = np.hypot(0.5 * (a - d), np.abs(a12))
    det = a * d - np.abs(a12) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(half > 0, det / (half + rad), half - rad)
    return small if np.ndim(small) else float(small)


def eta_minus(nu, s):
    """Smaller root eta of det(M_+^* M_+ - eta diag(K_-, K_+)) = 0 at each s != 0."""
    nu = check_coupling(nu, allow_zero=False)
    vm, vp = _shifted_symbols(_nonzero(s))
    k_minus, k_plus = _weights(nu, vm, vp)
    a11, a22, _, det = _gram_entries(nu, vm, vp)
    qa = k_minus * k_plus
    qb = a11 * k_plus + a22 * k_minus
    disc = np.sqrt(np.maximum(qb * qb - 4.0 * qa * det, 0.0))
    root = 2.0 * det / (qb + disc)
    return root if np.ndim(root) else float(root)
