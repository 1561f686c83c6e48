"""Quadrature versions of the unitary Mellin transform and the channel Hankel transform.

Both act on samples of a function on a radial grid.  They are used by the
property tests (symbol identities, unitarity), not by the matrix assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from ..errors import DataError
from ..symbols import check_channel

ESCAPE_RTOL = 1e-8


@dataclass
class TransformResult:
    values: np.ndarray
    meta: dict = field(default_factory=dict)


def _prepare(values, r):
    r = np.asarray(r, dtype=float)
    values = np.asarray(values)
    if r.ndim != 1 or r.shape != values.shape or r.size < 3:
        raise DataError("samples and radial grid must be 1-D arrays of the same length (>= 3)")
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise DataError("radial grid must be positive and strictly increasing")
    if not np.all(np.isfinite(values)):
        raise DataError("samples contain non-finite values")
    return values, r


def _escape_flag(values, r) -> bool:
    """True when the samples are not negligible at the ends of the grid (support escapes)."""
    scale = np.max(np.abs(values)) if values.size else 0.0
    if scale == 0:
        return False
    edge = max(abs(values[0]), abs(values[-1]))
    return bool(edge > ESCAPE_RTOL * scale)


def mellin_samples(values, r, s_grid) -> TransformResult:
    """(M psi)(s) = (2 pi)^{-1/2} int r^{-1/2 - is} psi(r) dr by Simpson's rule in log r."""
    values, r = _prepare(values, r)
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    u = np.log(r)
    # d r = r du; r^{-1/2-is} r = r^{1/2} e^{-isu}
    integrand = (np.sqrt(r) * values)[None, :] * np.exp(-1j * s[:, None] * u[None, :])
    out = integrate.simpson(integrand, x=u, axis=1) / np.sqrt(2 * np.pi)
    return TransformResult(out, {"support_escapes": _escape_flag(values, r), "n_samples": r.size})


def hankel_channel(m, values, r, p) -> TransformResult:
    """int sqrt(pr) J_m(pr) psi(r) dr on the momenta p (Simpson's rule in r).

    The channel Fourier transform carries the extra phase (-i)^m; it is left
    out of ``values`` and reported in ``meta['phase']`` so real input stays real.
    """
    m = check_channel(m)
    values, r = _prepare(values, r)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p <= 0):
        raise DataError("momenta must be positive")
    pr = p[:, None] * r[None, :]
    integrand = np.sqrt(pr) * special.jv(m, pr) * values[None, :]
    out = integrate.simpson(integrand, x=r, axis=1)
    # resolution: the grid should sample the fastest oscillation at least ~8 times per period
    h = float(np.max(np.diff(r)))
    resolved = bool(np.max(p) * h < 2 * np.pi / 8)
    meta = {"phase": complex((-1j) ** (m % 4)), "order": m,
            "support_escapes": _escape_flag(values, r), "resolved": resolved}
    return TransformResult(out, meta)


def l2_norm_squared(values, x) -> float:
    """int |f|^2 dx by Simpson's rule (for unitarity checks)."""
    values = np.asarray(values)
    return float(integrate.simpson(np.abs(values) ** 2, x=np.asarray(x, dtype=float)))
