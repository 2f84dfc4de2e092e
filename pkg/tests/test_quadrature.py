import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drspace.quadrature import CompositeGrid, merge_edges, spectral_grid, subdivide, uniform_grid


def test_polynomials_integrate_exactly():
    g = CompositeGrid(np.array([0.0, 0.3, 1.0, 2.5]), 8)
    x = g.nodes
    for n in range(16):
        assert g.integrate(x**n) == pytest.approx(2.5 ** (n + 1) / (n + 1), rel=1e-13)


def test_interpolation_reproduces_smooth_function():
    g = uniform_grid(0.0, 3.0, 0.5, 16)
    x = np.linspace(0, 3, 101)
    assert np.max(np.abs(g.interpolate(np.sin(g.nodes), x) - np.sin(x))) < 1e-13


def test_interpolation_outside_grid_rejected():
    g = uniform_grid(0.0, 1.0, 0.5, 4)
    with pytest.raises(ValueError):
        g.interpolate(g.nodes, [1.5])


@given(st.floats(0.0, 10.0), st.floats(0.0, 10.0), st.floats(0.0, 10.0))
def test_partial_integrals_are_additive(a, b, c):
    g = uniform_grid(0.0, 10.0, 1.0, 12)
    v = np.exp(-g.nodes / 3) * np.cos(g.nodes)
    assert g.partial(v, a, b) + g.partial(v, b, c) == pytest.approx(g.partial(v, a, c), abs=1e-13)


def test_partial_keeps_relative_accuracy_in_the_far_tail():
    g = spectral_grid(1e3, order=16, breakpoints=[1.0])
    v = np.where(g.nodes >= 1, g.nodes, 1.0) ** -5.0
    exact = (600.0**-4 - 1e3**-4) / 4
    assert g.partial(v, 600, 1e3) == pytest.approx(exact, rel=1e-9)


def test_antiderivative_matches_partial():
    g = uniform_grid(0.0, 4.0, 0.5, 10)
    v = np.exp(-g.nodes)
    xs = np.array([0.0, 0.7, 2.2, 4.0])
    assert np.allclose(g.antiderivative(v, xs), 1 - np.exp(-xs), atol=1e-13)


def test_spectral_grid_is_dyadic_and_contains_breakpoints():
    g = spectral_grid(1e3, breakpoints=[1.0, 7.0])
    assert g.lo == 0 and g.hi == 1e3
    assert 1.0 in g.edges and 7.0 in g.edges
    assert math.isclose(g.integrate(np.ones(len(g))), 1e3, rel_tol=1e-14)


def test_merge_and_subdivide():
    e = merge_edges([0, 1, 2], [1 + 1e-15, 3])
    assert list(e) == [0, 1, 2, 3]
    assert np.max(np.diff(subdivide(e, 0.4))) <= 0.4 + 1e-15


def test_grids_compare_by_value():
    assert uniform_grid(0, 1, 0.5, 4) == uniform_grid(0, 1, 0.5, 4)
    assert hash(uniform_grid(0, 1, 0.5, 4)) == hash(uniform_grid(0, 1, 0.5, 4))
    assert uniform_grid(0, 1, 0.5, 4) != uniform_grid(0, 1, 0.5, 6)
