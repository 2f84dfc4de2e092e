import math
import pickle

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drspace import dyadic_sum_bound, make_modulus, mo_lower_index, monotonicity_audit, standard_modulus, zygmund_z0, zygmund_zk
from drspace.moduli import ModulusError, almost_decreasing_constant


def test_sqrt_modulus_closed_form_constants():
    w = standard_modulus("power", 0.5, k=1)
    assert zygmund_z0(w).C == pytest.approx(2.0, rel=1e-4)
    assert zygmund_zk(w).C == pytest.approx(2.0, rel=1e-6)
    assert mo_lower_index(w).value == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_power_constants(alpha):
    w = standard_modulus("power", alpha, k=1)
    assert zygmund_z0(w).C == pytest.approx(1 / alpha, rel=1e-3)
    assert zygmund_zk(w).C == pytest.approx(1 / (1 - alpha), rel=1e-3)


def test_boundary_power_fails_zk():
    w = standard_modulus("power", 2.0, k=2, strict=False)
    assert not zygmund_zk(w).member
    assert zygmund_z0(w).member


def test_strict_range_enforced():
    with pytest.raises(ModulusError, match="alpha"):
        standard_modulus("power", 2.0, k=2)
    with pytest.raises(ModulusError):
        standard_modulus("power_log", 0.5, 1.0, delta0=2.0)


def test_power_log_index():
    w = standard_modulus("power_log", 0.5, 1.0, k=1)
    m = mo_lower_index(w)
    assert abs(m.value - 0.5) <= max(m.error, 1e-3)


def test_modulus_must_vanish_at_zero():
    with pytest.raises(ModulusError):
        make_modulus(lambda t: np.asarray(t) * 0 + 1.0, 1, 0.5)


def test_tail_extension():
    w = standard_modulus("power", 0.5, k=1, delta0=0.25)
    assert w(10.0) == pytest.approx(0.5)
    b = standard_modulus("power", 0.5, k=1, delta0=0.25, tail="bounded_below", tail_value=3.0)
    assert b(10.0) == pytest.approx(3.0)


@given(st.floats(0.05, 1.9), st.sampled_from([1.0, 2.0]))
def test_powers_are_monotone_moduli(alpha, k):
    if alpha >= k:
        return
    w = standard_modulus("power", alpha, k=k)
    c_incr, c_decr = monotonicity_audit(w)
    assert c_incr == pytest.approx(1.0) and c_decr == pytest.approx(1.0)


def test_dyadic_sum_bound_dominates():
    w = standard_modulus("power", 0.5, k=1)
    s = dyadic_sum_bound(w, 0.1, 0.4)
    assert s.total == pytest.approx(0.1 / (1 - 0.5), rel=1e-8)
    assert s.total <= s.bound
    with pytest.raises(ValueError, match="MO lower index"):
        dyadic_sum_bound(w, 0.1, 0.6)


def test_almost_decreasing_constant_power_log():
    w = standard_modulus("power_log", 1.5, 1.0, k=2)
    assert 1 <= almost_decreasing_constant(w, 2.0) < 10


def test_modulus_pickles():
    w = standard_modulus("power_log", 0.5, 1.0)
    assert pickle.loads(pickle.dumps(w))(0.01) == w(0.01)
