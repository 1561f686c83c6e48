import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate, special

from diracbounds.channels import linalg as L
from diracbounds.channels.momentum import (MomentumGrid, coulomb_matrix, coulomb_toeplitz, hardy_remainder_matrix,
                                           power_diag, scalar_channel_matrix)
from diracbounds.channels.pointwise import critical_gap, eta_minus, kato_weights, m_matrix
from diracbounds.channels.radial import (CoreElement, ExponentialPotential, RadialBasis, _cell_projection,
                                         dirac_channel_matrix, exponential_cell_matrix, hankel_power_exp,
                                         multiplier_matrix, potential_matrix)
from diracbounds.channels.transforms import hankel_channel, l2_norm_squared, mellin_samples
from diracbounds.errors import ConfigurationError, DataError, DomainError, UsageError
from diracbounds.specfun import legendre_q_half
from diracbounds.symbols import alpha_crit, xi_values
from diracbounds.suites import tolerance

SMALL = MomentumGrid(1e-2, 1e2, 60)


# ------------------------------------------------------------ pointwise symbols


def test_m_matrix_and_pole_at_zero():
    m = m_matrix(0.3, 1, np.array([0.5, 2.0]))
    assert m.shape == (2, 2, 2) and np.all(m[:, 0, 1] == 1)
    with pytest.raises(DomainError):
        m_matrix(0.3, 1, 0.0)
    with pytest.raises(DomainError):
        critical_gap(0.3, 1, [0.0, 1.0], 0.1)
    with pytest.raises(DomainError):
        m_matrix(0.3, 2, 1.0)


def test_critical_gap_properties():
    s = np.logspace(-4, 3, 2000)
    for nu in (0.1, 0.3, 0.5):
        assert np.min(critical_gap(nu, 1, s, 0.0)) > 0
        np.testing.assert_allclose(critical_gap(nu, 1, s, 0.4), critical_gap(nu, -1, s, 0.4), rtol=1e-12)
        # the gap vanishes at the determinant root eta_minus
        e = eta_minus(nu, s[::50])
        g = np.array([critical_gap(nu, 1, x, y) for x, y in zip(s[::50], e)])
        assert np.max(np.abs(g)) < 1e-9
    k1, k2 = kato_weights(0.3, 1, 1.0)
    assert kato_weights(0.3, -1, 1.0) == (k2, k1)


def test_critical_gap_against_dense_eigenvalues():
    nu, eta = 0.4, 0.9
    for s in (1e-3, 0.2, 5.0, -3.0):
        m = m_matrix(nu, 1, s)
        km, kp = kato_weights(nu, 1, s)
        mat = m.conj().T @ m - eta * np.diag([km, kp])
        assert abs(np.linalg.eigvalsh(mat)[0] - critical_gap(nu, 1, s, eta)) < 1e-10 * max(1, abs(km))


# ------------------------------------------------------------ linear algebra


def test_abs_operator_identities():
    op = L.HermitianOperator(np.diag([-1.0, 2.0]))
    np.testing.assert_allclose(L.abs_operator(op).matrix, np.diag([1.0, 2.0]), atol=1e-15)
    rng = np.random.default_rng(0)
    a = rng.normal(size=(30, 30))
    a = a + a.T
    g = rng.normal(size=(30, 30))
    g = g @ g.T + 30 * np.eye(30)
    op = L.HermitianOperator(a)
    ab = L.abs_operator(op)
    np.testing.assert_allclose(ab.matrix @ ab.matrix, a @ a, atol=1e-10)
    np.testing.assert_allclose(L.abs_operator(ab).matrix, ab.matrix, atol=1e-10)
    # with a Gram matrix: |A| G^{-1} |A| = A G^{-1} A
    opg = L.HermitianOperator(a, g)
    abg = L.abs_operator(opg)
    gi = np.linalg.inv(g)
    np.testing.assert_allclose(abg.matrix @ gi @ abg.matrix, a @ gi @ a, atol=1e-10)
    ev, vec = L.positive_projection(opg)
    assert np.all(ev >= 0) and np.allclose(vec.T @ g @ vec, np.eye(len(ev)), atol=1e-10)


def test_inequality_gap_and_metadata():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(10, 10))
    a = a + a.T
    op = L.HermitianOperator(a, meta={"basis": "x"})
    assert abs(L.operator_inequality_gap(op, op)) < 1e-14
    zero = op.with_matrix(np.zeros((10, 10)))
    assert abs(L.operator_inequality_gap(op, zero) - np.linalg.eigvalsh(a)[0]) < 1e-12
    other = L.HermitianOperator(a, meta={"basis": "y"})
    with pytest.raises(UsageError):
        L.operator_inequality_gap(op, other)
    with pytest.raises(UsageError):
        L.HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(UsageError):
        op + L.HermitianOperator(a, np.eye(10), {"basis": "x"})
    assert np.array_equal(op.identity().matrix, np.eye(10))


# ------------------------------------------------------------ momentum cells


def test_power_diag_exact():
    g = MomentumGrid(1e-2, 1e2, 40)
    np.testing.assert_allclose(power_diag(0.0, g), 1.0, rtol=1e-13)
    e = g.edges
    ref = np.array([integrate.quad(lambda p: p ** 0.5 / p ** 2, a, b)[0] for a, b in zip(e[:-1], e[1:])])
    np.testing.assert_allclose(power_diag(0.5, g), ref / g.gram_diag, rtol=1e-10)
    with pytest.raises(ConfigurationError):
        MomentumGrid(1.0, 0.5, 40)


@pytest.mark.parametrize("j", [-0.5, 0.5, 1.5])
def test_coulomb_toeplitz_against_oracles(j):
    d = 0.35
    w = coulomb_toeplitz(j, d, 6)
    # touching cells: mpmath quadrature of the reduced one-dimensional form
    q = lambda t: mp.legenq(j, 0, mp.cosh(t), type=3).real
    with mp.workdps(30):
        w0 = 2 * mp.quad(lambda t: (d - t) * q(t), [1e-12, 1e-6, 1e-3, d])
    assert abs(w[0] - float(w0)) < 1e-9 * abs(float(w0))
    # separated cells: scipy dblquad over the two cells with the quadrature Legendre route
    for k in (2, 5):
        ref = integrate.dblquad(lambda u, x: legendre_q_half(j, math.cosh(k * d + u - x)), 0, d, 0, d,
                                epsabs=0, epsrel=1e-11)[0]
        assert abs(w[k] - ref) < 1e-9 * ref


def test_scalar_channel_matrix():
    g = MomentumGrid(1e-2, 1e2, 80)
    op = scalar_channel_matrix(0, 0.0, g)
    np.testing.assert_allclose(op.matrix, np.diag(power_diag(1.0, g)))
    with pytest.raises(ConfigurationError):
        scalar_channel_matrix(0, 0.1, g, cell_average=False)
    with pytest.raises(DomainError):
        scalar_channel_matrix(0, -1.0, g)
    for m in (0, 1, 2):
        a = alpha_crit(m)
        assert scalar_channel_matrix(m, a, g).smallest_eigenvalue() >= -tolerance(80, 1e-2, 1e2)
        lo = scalar_channel_matrix(m, 0.5 * a, g).smallest_eigenvalue()
        assert lo >= 0.5 * g.p_min - 1e-12


def test_supercritical_coupling_diverges_under_widening():
    vals = []
    for top in (0, 2, 4):
        g = MomentumGrid(1e-8, 10.0 ** top, 20 * (8 + top))
        vals.append(scalar_channel_matrix(0, 1.1 * alpha_crit(0), g).smallest_eigenvalue())
    # dilation invariance: the negative energy grows linearly with the momentum cutoff
    assert vals[0] < 0
    assert vals[1] < 50 * vals[0] and vals[2] < 50 * vals[1]


def test_hardy_remainder_limits():
    g = SMALL
    base = scalar_channel_matrix(1, alpha_crit(1), g).matrix
    op = hardy_remainder_matrix(1, 0.8, 1e12, 0.0, g)
    np.testing.assert_allclose(op.matrix, base + np.eye(g.n) * 1e-12, atol=1e-14)
    with pytest.raises(DomainError):
        hardy_remainder_matrix(1, 1.0, 1.0, 0.1, g)
    with pytest.raises(DomainError):
        hardy_remainder_matrix(1, 0.5, -1.0, 0.1, g)


# ------------------------------------------------------------ Dirac channel pencil


def hankel_quad(m, f, p):
    return integrate.quad(lambda r: math.sqrt(p * r) * special.jv(m, p * r) * f(r), 0, 60,
                          limit=400, epsabs=0, epsrel=1e-11)[0]


@pytest.mark.parametrize("m,b", [(0, 0.3), (1, 0.0), (-1, 0.4), (2, 0.1)])
def test_hankel_closed_form(m, b):
    for p in (0.05, 0.7, 3.0):
        assert abs(hankel_power_exp(m, b, 1.0, p) - hankel_quad(m, lambda r: r ** b * math.exp(-r), p)) < 1e-8
    assert abs(hankel_power_exp(m, b, 2.5, 1.3)
               - hankel_quad(m, lambda r: r ** b * math.exp(-2.5 * r), 1.3)) < 1e-8


def test_core_element():
    core = CoreElement(0.3, -0.5)
    c, dc = core.coef, core.d_coef
    assert abs(c[0] * dc[0] + c[1] * dc[1]) < 1e-15
    b = core.beta
    ref = (c[0] ** 2 + c[1] ** 2) * integrate.quad(lambda r: r ** (2 * b) * math.exp(-2 * r), 0, np.inf)[0]
    assert abs(core.norm2() - ref) < 1e-12
    assert abs(core.power_expectation(0.0) - core.norm2()) < 1e-10
    # <psi, p psi> from the momentum picture
    direct = 0.0
    for cc, m in zip(core.coef, core.orders):
        direct += cc * cc * integrate.quad(lambda p: p * hankel_power_exp(m, b, 1.0, p) ** 2, 0, np.inf,
                                           limit=400)[0]
    assert abs(core.power_expectation(1.0) - direct) < 1e-8 * direct
    with pytest.raises(DomainError):
        CoreElement(0.5, 0.5).power_expectation(1.5)


def test_dirac_channel_pencil():
    basis = RadialBasis(SMALL)
    op = dirac_channel_matrix(0.3, 0.5, basis)
    assert op.size == 2 * SMALL.n + 1 and op.gram is not None
    assert np.allclose(op.matrix, op.matrix.T)
    with pytest.raises(ConfigurationError):
        dirac_channel_matrix(0.3, 0.5, RadialBasis(SMALL, with_core=False))
    # no core needed off the critical channels or at nu = 0
    assert dirac_channel_matrix(0.3, 1.5, basis).gram is None
    assert dirac_channel_matrix(0.0, 0.5, basis).gram is None
    # free channel: |D| = p exactly on the cell basis
    for kappa in (0.5, -1.5, 2.5):
        d = L.abs_operator(dirac_channel_matrix(0.0, kappa, basis))
        assert abs(L.operator_inequality_gap(d, multiplier_matrix(0.0, kappa, 1.0, basis))) < 1e-10
    with pytest.raises(UsageError):
        dirac_channel_matrix(0.3, 0.5, basis) - dirac_channel_matrix(0.1, 0.5, basis)


@pytest.mark.slow
def test_critical_channel_smallest_modulus_stable_under_refinement():
    vals = []
    for n in (200, 400):
        op = dirac_channel_matrix(0.5, 0.5, RadialBasis(MomentumGrid(1e-3, 1e3, n)))
        vals.append(np.min(np.abs(op.eigvalsh())))
    assert abs(vals[1] - vals[0]) < 0.05 * vals[1]


def test_exponential_potential_form_against_radial_integral():
    g = MomentumGrid(1e-3, 1e3, 240)
    for m, rate in ((0, 1.0), (1, 2.0), (3, 0.5)):
        f = lambda r: r ** (abs(m) + 0.5) * np.exp(-r)
        fhat = lambda p: hankel_power_exp(m, abs(m) + 0.5, 1.0, p)

        c = _cell_projection(g, fhat)
        form = c @ exponential_cell_matrix(m, rate, g) @ c
        ref = integrate.quad(lambda r: math.exp(-rate * r) * f(r) ** 2, 0, np.inf)[0]
        assert abs(form - ref) < 2e-3 * ref


def test_potential_matrix_psd_and_family():
    basis = RadialBasis(SMALL)
    v = potential_matrix(0.3, -0.5, ExponentialPotential.single(2.0), basis)
    assert np.min(np.linalg.eigvalsh(v.matrix)) > -1e-10 * np.max(np.abs(v.matrix))
    two = ExponentialPotential(((1.0, 1.0), (1.0, 1.0)))
    np.testing.assert_allclose(potential_matrix(0.3, 1.5, two, basis).matrix,
                               potential_matrix(0.3, 1.5, ExponentialPotential.single(2.0), basis).matrix,
                               rtol=1e-12, atol=1e-15)
    assert abs(ExponentialPotential.single(3.0, 2.0).radial_moment(2.0) - 2 * math.pi * 9 / 16) < 1e-14
    mix = ExponentialPotential(((1.0, 1.0), (0.5, 3.0)))
    ref = 2 * math.pi * integrate.quad(lambda r: mix(r) ** 3 * r, 0, np.inf)[0]
    assert abs(mix.radial_moment(3.0) - ref) < 1e-10 * ref
    assert ExponentialPotential.single(0.0).is_zero
    with pytest.raises(DataError):
        ExponentialPotential(((-1.0, 1.0),))


# ------------------------------------------------------------ quadrature transforms


R = np.concatenate([np.logspace(-8, -1, 300, endpoint=False), np.linspace(0.1, 10, 1200)])


def test_mellin_gamma_oracle():
    s = np.linspace(-4, 4, 9)
    out = mellin_samples(np.sqrt(R) * np.exp(-R), R, s)
    ref = np.array([complex(mp.gamma(1 - 1j * x)) for x in s]) / math.sqrt(2 * math.pi)
    # the grid stops at r = 10, so the tail e^{-10} is flagged as escaping
    assert out.meta["support_escapes"]
    r = np.concatenate([np.logspace(-10, -1, 400, endpoint=False), np.linspace(0.1, 50, 6000)])
    out = mellin_samples(np.sqrt(r) * np.exp(-r), r, s)
    assert np.max(np.abs(out.values - ref)) < 1e-5
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=R.size), rng.normal(size=R.size)
    lin = mellin_samples(2 * a - b, R, s).values
    assert np.allclose(lin, 2 * mellin_samples(a, R, s).values - mellin_samples(b, R, s).values)


def test_mellin_plancherel():
    r = np.logspace(-9, 2, 6000)
    psi = np.exp(-2 * np.log(r) ** 2) / np.sqrt(r) * (1 + 0.2 * np.sin(np.log(r)))
    s = np.linspace(-30, 30, 3001)
    out = mellin_samples(psi, r, s)
    assert abs(l2_norm_squared(out.values, s) - l2_norm_squared(psi, r)) < 1e-8
    assert not out.meta["support_escapes"]


@pytest.mark.parametrize("m", [0, 1, 2])
def test_channel_transform_symbol_identity(m):
    psi = R ** (m + 0.5) * np.exp(-R * R / 2) * (1 + 0.3 * R * R)
    s = np.array([-2.0, -0.5, 0.3, 1.0, 3.0])
    h = hankel_channel(m, psi, R, R)
    assert h.meta["resolved"]
    lhs = mellin_samples(h.values * h.meta["phase"], R, s).values
    rhs = xi_values(m, s)[0] * mellin_samples(psi, R, -s).values
    assert np.max(np.abs(lhs - rhs)) < 1e-5
    assert abs(l2_norm_squared(h.values, R) - l2_norm_squared(psi, R)) < 1e-9
    hm = hankel_channel(-m, psi, R, R)
    assert np.allclose(hm.values, (-1) ** m * h.values, atol=1e-14)


def test_transform_input_validation():
    assert np.all(hankel_channel(1, np.zeros_like(R), R, R[:5]).values == 0)
    with pytest.raises(DataError):
        mellin_samples(np.ones(3), np.array([1.0, 0.5, 2.0]), [0.0])
    with pytest.raises(DataError):
        hankel_channel(0, np.ones(4), np.arange(1.0, 5.0), [-1.0])
    with pytest.raises(DataError):
        mellin_samples(np.array([1.0, np.nan, 1.0]), np.arange(1.0, 4.0), [0.0])
