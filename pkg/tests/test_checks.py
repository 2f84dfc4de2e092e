import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drspace import (
    HolderParams,
    band_limited_profile,
    besov_check,
    converse_hypotheses,
    converse_titchmarsh,
    dyadic_shell_equiv,
    forward_titchmarsh,
    holder_integrability,
    lipcor_two_sided,
    power_profile,
    standard_modulus,
    tail_energy,
)
from drspace.checks import stabilization_index

T = np.geomspace(1e-3, 1e-1, 8)


@pytest.fixture(scope="module")
def fh(s21):
    return power_profile(s21, 0.5)


@pytest.fixture(scope="module")
def w_half():
    return standard_modulus("power", 0.5, k=1)


def test_tail_energy_closed_form(fh):
    for t in T:
        assert tail_energy(fh, 1 / t) == pytest.approx(t**4 / 4, rel=1e-8)


@given(st.floats(0.5, 1e5), st.floats(1.0, 10.0))
def test_tail_energy_nonincreasing(s, factor):
    from drspace import derive_params

    p = derive_params(2, 1)
    f = power_profile(p, 0.5)
    for weight in ("flat", "power_dminus1", "plancherel"):
        assert tail_energy(f, s * factor, weight) <= tail_energy(f, s, weight) * (1 + 1e-12)


def test_power_weight_identity(s21, fh):
    from drspace.transform import SpectralFunction

    g = SpectralFunction(s21, fh.grid, fh.values * fh.lam ** 1.5, fh.tail.__class__(fh.tail.exponent - 1.5))
    assert tail_energy(fh, 10.0, "power_dminus1") == pytest.approx(tail_energy(g, 10.0), rel=1e-10)


def test_tail_energy_unknown_weight(fh):
    with pytest.raises(ValueError):
        tail_energy(fh, 1.0, "heavy")


def test_forward_power(s21, fh, w_half):
    r = forward_titchmarsh(s21, None, fh, w_half, T)
    assert r.verdict == "pass" and math.isfinite(r.ratio_sup)
    assert len(r.t_grid) == 8


def test_forward_homogeneity(s21, fh, w_half):
    a = forward_titchmarsh(s21, None, fh, w_half, T)
    b = forward_titchmarsh(s21, None, fh.scaled(2.0), w_half, T)
    assert b.extras["L"] == pytest.approx(2 * a.extras["L"], rel=1e-12)
    assert np.allclose(b.lhs, 4 * np.array(a.lhs), rtol=1e-12)
    assert b.extras["ratio_sup_over_L2"] == pytest.approx(a.extras["ratio_sup_over_L2"], rel=1e-10)


def test_forward_band_limited(s21, w_half):
    r = forward_titchmarsh(s21, None, band_limited_profile(s21), w_half, T)
    assert r.verdict == "pass" and all(v == 0 for v in r.lhs)


def test_dyadic_power_geometric_pattern(fh, w_half):
    r = dyadic_shell_equiv(fh, w_half, T)
    assert r.verdict == "pass"
    # shell/tail = 1 − 2^{-2α} for tail ~ t^{2α}: exactly 1/2 at α = 1/2
    assert r.extras["tail_over_shell_max"] == pytest.approx(2.0, rel=1e-9)
    assert r.extras["inclusion_slack_min"] >= -1e-12
    assert r.extras["empirical_C_max"] <= r.extras["proof_C_min"]


def test_dyadic_power_log(s21):
    w = standard_modulus("power_log", 0.5, 1.0, k=1)
    r = dyadic_shell_equiv(power_profile(s21, 0.5, 1.0), w, T)
    assert r.verdict == "pass"
    assert r.extras["empirical_C_max"] <= r.extras["proof_C_min"]


def test_hypotheses_examples():
    assert converse_hypotheses(standard_modulus("power", 0.5, k=1)).verdict == "pass"
    r = converse_hypotheses(standard_modulus("power", 2.0, k=2, strict=False))
    assert r.verdict == "fail"
    assert [h.name for h in r.hypotheses if not h.passed] == ["zygmund_zk"]
    assert converse_hypotheses(standard_modulus("power_log", 1.5, 1.0, k=2)).verdict == "pass"


def test_converse_power(s21, fh, w_half):
    r = converse_titchmarsh(s21, None, fh, w_half, T)
    assert r.verdict == "pass"
    assert r.extras["direct_le_majorant"] and r.extras["majorant_le_chain"]


def test_converse_gate_gives_inconclusive(s21, fh):
    r = converse_titchmarsh(s21, None, fh, standard_modulus("power", 2.0, k=2, strict=False), T)
    assert r.verdict == "inconclusive"


def test_converse_zero_function(s21, fh, w_half):
    r = converse_titchmarsh(s21, None, fh.scaled(0.0), w_half, T)
    assert r.verdict == "pass" and all(v == 0 for v in r.lhs)


def test_converse_band_limited(s21, w_half):
    r = converse_titchmarsh(s21, None, band_limited_profile(s21), w_half, T)
    assert r.verdict == "pass"
    assert r.extras["premise_constant"] == 0


def test_lipcor_alpha_15_gamma_1(s21):
    r = lipcor_two_sided(s21, 1.5, 1.0, T)
    assert r.verdict == "pass" and r.extras["spread_lip"] <= 20


def test_lipcor_rejects_alpha(s21):
    with pytest.raises(ValueError):
        lipcor_two_sided(s21, 2.0, 0.0)


def test_besov_band_limited(s21):
    r = besov_check(s21, None, band_limited_profile(s21), 0.5, 16)
    assert r.verdict == "pass" and r.extras["fubini_rel_err"] < 1e-6


def test_holder_parameters():
    hp = HolderParams(0.5)
    assert hp.p_prime == 2 and hp.gamma_q == 0
    assert hp.threshold(4) == pytest.approx(1.6)
    with pytest.raises(ValueError):
        HolderParams(1.5)
    with pytest.raises(ValueError):
        HolderParams(0.5, p=1.5, q=1.2)


def test_holder_rejects_p_not_2(s21, fh):
    with pytest.raises(ValueError, match="p = 2"):
        holder_integrability(s21, None, fh, HolderParams(0.5, p=1.5, q=2.0))


def test_stabilization_index():
    assert stabilization_index([1, 2, 2.0001, 2.0002]) == 2
    assert stabilization_index([1, 2, 3, 4]) is None
    assert stabilization_index(np.zeros(4)) == 1
