import numpy as np
import pytest

from gpsol import Grid, SampledField, derivative, integrate, second_derivative
from gpsol.grid import cumulative_integral, derivative_adjoint


def test_grid_rejects_even_or_tiny_node_counts():
    with pytest.raises(ValueError):
        Grid(10.0, 100)
    with pytest.raises(ValueError):
        Grid(10.0, 1)
    with pytest.raises(ValueError):
        Grid(-1.0, 101)


def test_grid_nodes_symmetric_and_increasing():
    g = Grid(7.0, 141)
    assert g.x[g.center_index] == 0.0
    np.testing.assert_array_equal(g.x, -g.x[::-1])
    assert np.all(np.diff(g.x) > 0)
    assert g.h == pytest.approx(2 * 7.0 / 140)


def test_sampled_field_validation():
    g = Grid(1.0, 5)
    with pytest.raises(ValueError):
        SampledField([1.0, 2.0], g)
    with pytest.raises(ValueError):
        SampledField([1, 2, np.nan, 4, 5], g)
    f = SampledField([1, 2, 3, 4, 5], g)
    assert not f.values.flags.writeable


def test_derivative_annihilates_constants():
    g = Grid(5.0, 101)
    d = derivative(SampledField(np.full(101, 3.7), g))
    np.testing.assert_array_equal(d.values, 0.0)


def test_derivative_exact_on_affine():
    g = Grid(5.0, 101)
    d = derivative(SampledField(2.5 * g.x - 1.0, g))
    np.testing.assert_allclose(d.values, 2.5, atol=1e-12)


def test_derivative_sine_accuracy():
    g = Grid(10.0, 2001)  # h = 0.01
    d = derivative(SampledField(np.sin(g.x), g))
    err = np.max(np.abs(d.values[1:-1] - np.cos(g.x[1:-1])))
    assert err < 1e-4


def test_second_derivative_sine_accuracy():
    g = Grid(10.0, 2001)
    s = second_derivative(SampledField(np.sin(g.x), g))
    err = np.max(np.abs(s.values[1:-1] + np.sin(g.x[1:-1])))
    assert err < 1e-4


def test_integrate_constant():
    g = Grid(12.0, 241)
    assert integrate(SampledField(np.ones(241), g)) == pytest.approx(24.0, abs=1e-12)


def test_integrate_sech_squared():
    g = Grid(40.0, 8001)
    val = integrate(SampledField(1.0 / np.cosh(g.x) ** 2, g))
    assert val == pytest.approx(2.0, abs=1e-8)


def test_integrate_odd_function_vanishes():
    g = Grid(6.0, 601)
    assert abs(integrate(SampledField(g.x, g))) < 1e-12
    assert abs(integrate(SampledField(g.x ** 3, g))) < 1e-12


def test_integrate_linearity():
    g = Grid(3.0, 301)
    rng = np.random.default_rng(0)
    f = rng.normal(size=301)
    h = rng.normal(size=301)
    a, b = 2.25, -0.75
    lhs = integrate(SampledField(a * f + b * h, g))
    rhs = a * integrate(SampledField(f, g)) + b * integrate(SampledField(h, g))
    assert lhs == pytest.approx(rhs, abs=1e-13)


@pytest.mark.parametrize("n", [401, 801])
def test_integration_by_parts_even_function(n):
    # integrate(f * f') -> 0 as h -> 0 for even f (boundary terms cancel)
    g = Grid(10.0, n)
    f = SampledField(np.exp(-g.x ** 2), g)
    val = abs(integrate(SampledField(f.values * derivative(f).values, g)))
    assert val < 0.5 * g.h ** 2


def test_derivative_adjoint_identity():
    # integrate(D f * g) == integrate(f * D^T g) to machine precision
    g = Grid(4.0, 201)
    rng = np.random.default_rng(1)
    f = SampledField(rng.normal(size=201), g)
    w = SampledField(rng.normal(size=201), g)
    lhs = integrate(SampledField(derivative(f).values * w.values, g))
    rhs = integrate(SampledField(f.values * derivative_adjoint(w).values, g))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_cumulative_integral_inverts_derivative():
    g = Grid(8.0, 1601)
    f = SampledField(np.tanh(g.x), g)
    theta = cumulative_integral(f, anchor=0.0)
    recovered = derivative(theta)
    err = np.max(np.abs(recovered.values[1:-1] - f.values[1:-1]))
    assert err < 2.0 * g.h ** 2 * 10
