import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drspace import jacobi


def hyp_oracle(alpha, beta, mu, r):
    rho = alpha + beta + 1
    a = (rho + 1j * mu) / 2
    b = (rho - 1j * mu) / 2
    with mp.workdps(40):
        return float(mp.re(mp.hyp2f1(a, b, alpha + 1, -mp.sinh(r) ** 2)))


@pytest.mark.parametrize("alpha,beta", [(1.0, 0.0), (3.0, 1.0)])
@pytest.mark.parametrize("mu", [0.0, 0.7, 3.0, 20.0])
@pytest.mark.parametrize("r", [0.05, 0.6, 1.5, 4.0])
def test_matches_hypergeometric_oracle(alpha, beta, mu, r):
    v, err = jacobi.jacobi_phi_grid(alpha, beta, [mu], [r])
    ref = hyp_oracle(alpha, beta, mu, r)
    assert abs(v[0, 0] - ref) <= 1e-9 * max(1.0, abs(ref)) + 1e-12
    assert err[0, 0] < 1e-8


def test_closed_form_for_half_integer_indices():
    mus = np.array([0.3, 2.0, 15.0])
    rs = np.linspace(0.01, 6, 40)
    v, _ = jacobi.jacobi_phi_grid(0.5, 0.5, mus, rs)
    exact = 2 * np.sin(mus[:, None] * rs) / (mus[:, None] * np.sinh(2 * rs))
    assert np.max(np.abs(v - exact)) < 1e-10


def test_series_and_ode_agree_on_overlap():
    rs = np.array([0.2, 0.5, 0.9])
    mus = np.array([0.5, 3.0])
    s, _ = jacobi.jacobi_phi_grid(1.0, 0.0, mus, rs, method="series")
    o, _ = jacobi.jacobi_phi_grid(1.0, 0.0, mus, rs, method="ode")
    assert np.max(np.abs(s - o)) < 1e-10


def test_normalized_at_origin_and_even_in_mu():
    v, _ = jacobi.jacobi_phi_grid(3.0, 1.0, [-2.5, 2.5, 0.0], [0.0, 1.3])
    assert np.all(v[:, 0] == 1.0)
    assert v[0, 1] == v[1, 1]


@given(st.floats(0, 60), st.floats(0, 8))
def test_bounded_by_one(mu, r):
    v, _ = jacobi.jacobi_phi_grid(1.0, 0.0, [mu], [r])
    assert abs(v[0, 0]) <= 1 + 1e-10


def test_eigen_residual_small():
    res, h = jacobi.eigen_residual_study(2, 1, 1.0, 0.0, np.array([0.5, 1.0, 2.0]), np.linspace(0.2, 3, 15))
    assert np.max(np.abs(res)) < 1e-6


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi.jacobi_phi(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        jacobi.jacobi_phi_grid(1.0, 0.0, [1.0], [-0.1])
    with pytest.raises(ValueError):
        jacobi.jacobi_phi_grid(1.0, 0.0, [np.nan], [0.1])
    with pytest.raises(ValueError):
        jacobi.jacobi_phi_grid(1.0, 0.0, [1.0], [0.1], method="magic")


def c_oracle(alpha, beta, mu):
    rho = alpha + beta + 1
    with mp.workdps(50):
        mu = mp.mpf(mu)
        c = (
            2 ** (rho - 1j * mu)
            * mp.gamma(alpha + 1)
            * mp.gamma(1j * mu)
            / (mp.gamma((1j * mu + rho) / 2) * mp.gamma((1j * mu + alpha - beta + 1) / 2))
        )
        return float(mp.log(abs(c)))


@pytest.mark.parametrize("alpha,beta", [(1.0, 0.0), (3.0, 1.0), (2.5, 0.5)])
@pytest.mark.parametrize("mu", [1e-3, 0.5, 7.0, 49.0, 51.0, 1e4, 1e12])
def test_log_c_against_mpmath(alpha, beta, mu):
    assert jacobi.log_abs_c(alpha, beta, np.array([mu]))[0] == pytest.approx(c_oracle(alpha, beta, mu), abs=1e-12, rel=1e-13)


def test_c_inverse_square_regimes():
    small = jacobi.c_inverse_square(1.0, 0.0, np.array([0.0, 1e-10, 2e-10]), floor=1e-8)
    assert small[0] == 0.0
    assert small[2] / small[1] == pytest.approx(4.0, rel=1e-12)
    big = jacobi.c_inverse_square(1.0, 0.0, np.array([1e6, 2e6]))
    # |c(μ)|^{-2} ~ μ^{2α+1}
    assert big[1] / big[0] == pytest.approx(2.0**3, rel=1e-6)
