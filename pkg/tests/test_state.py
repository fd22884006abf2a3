import numpy as np
import pytest

from gpsol import Grid, PairState, build_scalar, integrate, validate
from gpsol.grid import derivative
from gpsol.state import ConstraintTargets, reconstruct_phase


def trivial_state(g):
    return PairState.from_arrays(np.ones(g.n_points), np.zeros(g.n_points),
                                 np.zeros(g.n_points), g)


def test_trivial_state_is_admissible():
    assert validate(trivial_state(Grid(10.0, 201))) == []


def test_validate_flags_modulus_bound():
    g = Grid(10.0, 201)
    rho = np.ones(201)
    rho[37] = 2.5
    s = PairState.from_arrays(rho, np.zeros(201), np.zeros(201), g)
    violations = validate(s)
    assert len(violations) == 1
    assert violations[0].node == 37
    assert violations[0].field == "rho"
    assert "0 < rho < 2" in str(violations[0])


def test_validate_flags_boundary_data():
    g = Grid(10.0, 201)
    v = np.zeros(201)
    v[0] = 0.1
    s = PairState.from_arrays(np.ones(201), np.zeros(201), v, g)
    violations = validate(s)
    assert len(violations) == 1
    assert violations[0].field == "v" and violations[0].node == 0


def test_validate_is_pure():
    g = Grid(10.0, 201)
    s = trivial_state(g)
    assert validate(s) == validate(s) == []


def test_constraint_targets_domain():
    ConstraintTargets(q=0.5, m=0.0, alpha=1.0, beta=0.0)
    with pytest.raises(ValueError):
        ConstraintTargets(q=2.0, m=0.1)
    with pytest.raises(ValueError):
        ConstraintTargets(q=0.5, m=-0.1)
    with pytest.raises(ValueError):
        ConstraintTargets(q=0.5, m=0.1, alpha=0.0)
    with pytest.raises(ValueError):
        ConstraintTargets(q=0.5, m=0.1, beta=-1.0)


def test_reconstruct_phase_zero_gradient():
    g = Grid(10.0, 201)
    theta = reconstruct_phase(trivial_state(g), anchor=0.0)
    np.testing.assert_array_equal(theta.values, 0.0)


def test_reconstruct_phase_constant_gradient():
    g = Grid(10.0, 201)
    s = PairState.from_arrays(np.ones(201), np.ones(201), np.zeros(201), g)
    theta = reconstruct_phase(s, anchor=0.0)
    np.testing.assert_allclose(theta.values, g.x + 10.0, atol=1e-12)


def test_reconstruct_phase_matches_quadrature_of_soliton_phase():
    g = Grid(40.0, 8001)
    s = build_scalar(1.0, g).state()
    theta = reconstruct_phase(s, anchor=0.0)
    total = theta.values[-1] - theta.values[0]
    assert total == pytest.approx(integrate(s.phi), abs=1e-10)


def test_phase_round_trip_is_second_order():
    errs = []
    for n in (1001, 2001):
        g = Grid(20.0, n)
        s = build_scalar(0.8, g).state()
        theta = reconstruct_phase(s)
        err = np.max(np.abs(derivative(theta).values[1:-1] - s.phi.values[1:-1]))
        errs.append(err)
    assert errs[1] < errs[0]
    assert errs[0] < 1e-4


def test_json_round_trip_is_exact():
    g = Grid(15.0, 301)
    rng = np.random.default_rng(5)
    rho = 1.0 + 0.3 * np.sin(rng.normal(size=301))
    phi = rng.normal(size=301) / 3.0
    v = rng.normal(size=301) / 7.0
    s = PairState.from_arrays(rho, phi, v, g)
    back = PairState.from_json(s.to_json())
    np.testing.assert_array_equal(back.rho.values, s.rho.values)
    np.testing.assert_array_equal(back.phi.values, s.phi.values)
    np.testing.assert_array_equal(back.v.values, s.v.values)
    assert back.grid == s.grid


def test_states_are_immutable():
    s = trivial_state(Grid(5.0, 101))
    with pytest.raises(ValueError):
        s.rho.values[3] = 2.0
