import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drspace import (
    compact_profile,
    gaussian_profile,
    inverse_transform,
    lip_deviation,
    lp_norm,
    power_profile,
    radial_function,
    spherical_mean,
    spherical_transform,
)
from drspace.transform import (
    SpectralFunction,
    TailDivergenceError,
    TailModel,
    lip_deviation_interval,
    lip_pieces,
    parseval_sides,
    weighted_integral,
)


@pytest.fixture(scope="module")
def compact21(s21):
    f = compact_profile(s21)
    return f, spherical_transform(s21, f)


def test_round_trip(s21, compact21):
    f, fh = compact21
    back = inverse_transform(s21, fh, f.grid)
    assert np.max(np.abs(back.values - f.values)) < 1e-8


def test_parseval_compact(s21, compact21):
    a, b = parseval_sides(s21, *compact21)
    assert b == pytest.approx(a, rel=1e-9)


def test_transform_is_linear(s21, compact21):
    f, fh = compact21
    g = spherical_transform(s21, (2.5 * f).with_values((2.5 * f).values), fh.grid)
    assert np.allclose(g.values, 2.5 * fh.values, rtol=0, atol=1e-13 * np.abs(fh.values).max())


def test_mean_at_origin_is_value_on_sphere(s21, compact21):
    f, fh = compact21
    for t in (0.3, 1.1):
        mt = spherical_mean(s21, f, t, fhat=fh)
        assert mt(0.0) == pytest.approx(f(t), abs=1e-8)
    assert spherical_mean(s21, f, 0.0) is f


def test_lip_deviation_spectral_vs_direct(s21, compact21):
    f, fh = compact21
    t = 0.4
    direct = lp_norm(s21, spherical_mean(s21, f, t, fhat=fh) - f, 2)
    assert lip_deviation(s21, fh, t) == pytest.approx(direct, rel=1e-7)


def test_lip_deviation_lp_needs_direct_function(s21, compact21):
    f, fh = compact21
    with pytest.raises(ValueError):
        lip_deviation(s21, fh, 0.3, p=1.5)
    assert lip_deviation(s21, fh, 0.3, p=1.5, f=f) > 0


def test_radial_function_validation(s21):
    with pytest.raises(ValueError):
        radial_function(s21, lambda t: np.where(t > 1, np.nan, 1.0))


@pytest.mark.parametrize("gamma,power,beta", [(4.5, 0.0, 2.0), (4.5, 3.0, 2.0), (2.25, 0.0, 1.4), (3.0, 1.0, 2.0)])
@pytest.mark.parametrize("log_power,shift", [(0, 0.0), (-1.0, 1.0), (2.0, 1.0)])
def test_tail_power_integrals(gamma, power, beta, log_power, shift):
    tm = TailModel(gamma, log_power, 1.3, shift)
    s = 50.0
    got = tm.power_integral(s, power, beta)
    f = lambda x: (1.3 * x**-gamma * (shift + mp.log(x)) ** -log_power) ** beta * x**power
    with mp.workdps(30):
        ref = float(mp.quad(f, [s, 1e3, 1e6, mp.inf]))
    assert got == pytest.approx(ref, rel=1e-9)


def test_divergent_tail_states_inequality():
    with pytest.raises(TailDivergenceError, match=">"):
        TailModel(1.0).power_integral(10.0, power=1.0)


def test_plancherel_tail_integral(s21):
    fh = power_profile(s21, 0.5)
    from drspace.spherical import plancherel_density

    g = lambda x: float(x) ** -5 * float(plancherel_density(s21, float(x)))
    with mp.workdps(20):
        ref = float(mp.quad(g, [2000, 1e4, 1e6, mp.inf]))
    assert weighted_integral(fh, 2000, plancherel=True) == pytest.approx(ref, rel=1e-8)


def test_spectral_tail_mismatch_rejected(s21):
    fh = power_profile(s21, 0.5)
    with pytest.raises(ValueError):
        SpectralFunction(s21, fh.grid, fh.values, TailModel(2.0))


@given(st.floats(1e-3, 0.5))
def test_lip_bracket_ordered(t):
    from drspace import derive_params

    p = derive_params(2, 1)
    fh = _power(p)
    d = lip_deviation_interval(p, fh, t)
    assert d.lower <= d.value <= d.upper
    pc = lip_pieces(p, fh, t, split=1 / t)
    assert pc.below <= pc.majorant_below * (1 + 1e-9)


_cache = {}


def _power(p):
    if p not in _cache:
        _cache[p] = power_profile(p, 0.5)
    return _cache[p]


def test_lip_homogeneity(s21):
    fh = _power(s21)
    assert lip_deviation(s21, fh.scaled(3.0), 0.01) == pytest.approx(3 * lip_deviation(s21, fh, 0.01), rel=1e-12)


def test_gaussian_parseval(s43):
    f = gaussian_profile(s43, 0.8)
    a, b = parseval_sides(s43, f, spherical_transform(s43, f))
    assert b == pytest.approx(a, rel=1e-9)
