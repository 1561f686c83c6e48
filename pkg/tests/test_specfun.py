import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from diracbounds.errors import DomainError
from diracbounds.specfun import (bessel_j, check_half_integer_order, digamma, gamma, legendre_q_half,
                                 legendre_q_half_cosh, ln_gamma)

mp.mp.dps = 30

complex_pts = st.builds(complex, st.floats(-30, 30), st.floats(-30, 30)).filter(
    lambda z: abs(z.imag) > 1e-3 or abs(z.real - round(z.real)) > 1e-3)


def test_gamma_half_is_sqrt_pi():
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14


@pytest.mark.parametrize("z", [0.3 + 0.1j, 2.5 - 7j, -3.7 + 0.2j, 12 + 40j, 1e-3 + 1e-3j, -0.5 + 3j])
def test_ln_gamma_matches_mpmath(z):
    ref = complex(mp.loggamma(mp.mpc(z.real, z.imag)))
    assert abs(ln_gamma(z) - ref) < 1e-12 * max(1.0, abs(ref))


@settings(max_examples=100, deadline=None)
@given(complex_pts)
def test_reflection_and_conjugation(z):
    lhs = gamma(z) * gamma(1 - z)
    rhs = np.pi / np.sin(np.pi * z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    # conjugation holds modulo 2*pi*i (branch cut on the negative real axis)
    d = ln_gamma(np.conj(z)) - np.conj(ln_gamma(z))
    d -= 2j * np.pi * np.round(d.imag / (2 * np.pi))
    assert abs(d) < 1e-10 * max(1.0, abs(ln_gamma(z)))


def test_ln_gamma_vectorised_and_poles():
    z = np.array([0.5, 1.5 + 2j, 7.25])
    np.testing.assert_allclose(ln_gamma(z), special.loggamma(z), rtol=1e-13)
    for pole in (0, -1, -7):
        with pytest.raises(DomainError):
            ln_gamma(pole)
    with pytest.raises(DomainError):
        ln_gamma(float("nan"))


def test_ln_gamma_far_left_modulo_2pi_i():
    z = -1500.3 + 0.4j
    ref = complex(mp.loggamma(mp.mpc(z.real, z.imag)))
    got = ln_gamma(z)
    assert abs(got.real - ref.real) < 1e-9 * abs(ref.real)
    k = (got.imag - ref.imag) / (2 * math.pi)
    assert abs(k - round(k)) < 1e-8


@pytest.mark.parametrize("z", [0.25, 1.0, 3.5 + 2j, -2.5 + 0.5j, 40 - 3j])
def test_digamma_matches_mpmath(z):
    ref = complex(mp.digamma(mp.mpc(complex(z).real, complex(z).imag)))
    assert abs(digamma(z) - ref) < 1e-12 * max(1.0, abs(ref))


def test_digamma_pole():
    with pytest.raises(DomainError):
        digamma(-3)


@pytest.mark.parametrize("m", range(0, 9))
def test_bessel_symmetry_exact(m):
    x = np.linspace(-60, 60, 241)
    assert np.array_equal(bessel_j(-m, x), (-1) ** m * bessel_j(m, x))


@pytest.mark.parametrize("m", [0, 1, 2, 5, 12, 30])
def test_bessel_matches_scipy(m):
    x = np.concatenate([np.linspace(0, 12, 50), np.linspace(12.1, 900, 200), [1500.0, 1e4, 5e4]])
    np.testing.assert_allclose(bessel_j(m, x), special.jv(m, x), atol=1e-12)


def test_bessel_errors():
    with pytest.raises(DomainError):
        bessel_j(0.5, 1.0)
    with pytest.raises(DomainError):
        bessel_j(1, np.inf)


@pytest.mark.parametrize("j", [-0.5, 0.5, 1.5, 3.5])
@pytest.mark.parametrize("z", [1.0001, 1.3, 3.0, 50.0])
def test_legendre_q_matches_mpmath(j, z):
    ref = float(mp.legenq(j, 0, z, type=3).real)
    assert abs(legendre_q_half(j, z) - ref) < 1e-10 * abs(ref)


@pytest.mark.parametrize("j", [-0.5, 0.5, 2.5])
def test_legendre_cosh_route_matches_quadrature(j):
    t = np.array([1e-4, 0.05, 0.3, 0.8, 2.0, 6.0])
    ref = [legendre_q_half(j, math.cosh(x)) for x in t]
    np.testing.assert_allclose(legendre_q_half_cosh(j, t), ref, rtol=1e-9)


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre_q_half(0.5, 1.0)
    with pytest.raises(DomainError):
        legendre_q_half(1.0, 2.0)
    with pytest.raises(DomainError):
        legendre_q_half_cosh(0.5, [0.0])
    assert check_half_integer_order(2.5) == 2.5
    with pytest.raises(DomainError):
        check_half_integer_order(-1.5)
