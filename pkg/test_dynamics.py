"""Tests for the system catalog and the RK4 integrator"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from odelip.core.dynamics import RhsSystem
from odelip.core.errors import DomainError, InputError, IntegrationError
from odelip.systems.catalog import builtin_systems, eval_rhs, eval_rhs_batch, get_system, oracle_systems
from odelip.systems.integrator import integrate, integrate_many


def test_builtin_catalog():
    systems = builtin_systems()
    assert len(systems) == 4
    assert [s.id for s in systems] == ["xcosx", "explog", "lotka_volterra", "pendulum"]
    assert not {"decay", "still"} & {s.id for s in systems}


def test_xcosx_defaults():
    system = get_system("xcosx")
    assert system.dt == 0.5
    assert system.time_interval == (0.0, 3.0)
    assert system.n_ic == 200
    assert system.ic_box == ((-2.5, 2.5),)
    assert system.n_times == 7


def test_pendulum_defaults():
    system = get_system("pendulum")
    assert system.dim == 2
    assert system.n_ic == 1000
    assert system.time_interval == (0.0, 2.0)


def test_unknown_system():
    with pytest.raises(InputError):
        get_system("lorenz")


def test_eval_rhs_examples():
    assert eval_rhs(get_system("xcosx"), 0.0, [0.0])[0] == 0.0
    np.testing.assert_array_equal(eval_rhs(get_system("lotka_volterra"), 0.0, [3.0, 1.5]), [0.0, 0.0])
    np.testing.assert_array_equal(eval_rhs(get_system("pendulum"), 0.0, [0.0, 0.0]), [0.0, 1.0])
    assert eval_rhs(get_system("explog"), 1.0, [0.0])[0] == -1.0


def test_eval_rhs_errors():
    with pytest.raises(InputError):
        eval_rhs(get_system("lotka_volterra"), 0.0, [1.0])
    with pytest.raises(DomainError):
        eval_rhs(get_system("explog"), 0.0, [1.0])
    with pytest.raises(DomainError):
        eval_rhs_batch(get_system("explog"), np.array([[1.0, 0.0], [-0.5, 0.0]]))


def test_eval_rhs_batch_matches_pointwise():
    system = get_system("pendulum")
    rng = np.random.default_rng(0)
    points = rng.uniform(0, 2, size=(25, 3))
    batch = eval_rhs_batch(system, points)
    for row, value in zip(points, batch):
        np.testing.assert_allclose(value, eval_rhs(system, row[0], row[1:]), rtol=0, atol=1e-15)


def test_invalid_system_rejected():
    with pytest.raises(InputError):
        RhsSystem(id="bad", dim=1, rhs=lambda t, x: x, time_interval=(1.0, 0.0), dt=0.5,
                  ic_box=((0.0, 1.0),), n_ic=1)
    with pytest.raises(InputError):
        RhsSystem(id="bad", dim=1, rhs=lambda t, x: x, time_interval=(0.0, 0.3), dt=0.5,
                  ic_box=((0.0, 1.0),), n_ic=1)


def test_decay_matches_exponential():
    decay = get_system("decay")
    trajectory = integrate(decay, [1.0])
    assert abs(trajectory.states[-1, 0] - math.exp(-1.0)) < 1e-8


def test_still_is_constant():
    still = get_system("still")
    trajectory = integrate(still, [0.7])
    np.testing.assert_array_equal(trajectory.states[:, 0], 0.7)


def test_xcosx_fixed_point():
    trajectory = integrate(get_system("xcosx"), [math.pi / 2])
    np.testing.assert_allclose(trajectory.states[:, 0], math.pi / 2, rtol=0, atol=1e-12)


def test_lotka_volterra_equilibrium():
    trajectory = integrate(get_system("lotka_volterra"), [3.0, 1.5])
    assert np.max(np.abs(trajectory.states - [3.0, 1.5])) < 1e-6


def test_time_grid_is_constructed():
    system = get_system("explog")
    trajectory = integrate(system, [1.0])
    expected = 0.1 + np.arange(system.n_times) * 0.5
    np.testing.assert_array_equal(trajectory.times, expected)
    assert trajectory.states[0, 0] == 1.0
    np.testing.assert_array_equal(trajectory.ic, [1.0])


def test_rk4_convergence_order():
    decay = get_system("decay")
    ladder = [2, 4, 8, 16]
    exact = math.exp(-1.0)
    errors = [abs(integrate(decay, [1.0], substeps=n).states[-1, 0] - exact) for n in ladder]
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine >= 8.0
    slope = -np.polyfit(np.log2(ladder), np.log2(errors), 1)[0]
    assert abs(slope - 4.0) < 0.2


def test_blow_up_raises_with_time():
    blowup = RhsSystem(id="blowup", dim=1, rhs=lambda t, x: x ** 2, time_interval=(0.0, 3.0), dt=0.5,
                       ic_box=((1.0, 1.0),), n_ic=1)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(IntegrationError) as info:
            integrate(blowup, [10.0])
    assert 0.0 < info.value.time <= 3.0


def test_integrate_rejects_bad_input():
    with pytest.raises(InputError):
        integrate(get_system("pendulum"), [1.0])
    with pytest.raises(InputError):
        integrate(get_system("xcosx"), [1.0], substeps=0)


def test_parallel_integration_matches_serial():
    system = get_system("lotka_volterra")
    ics = np.random.default_rng(3).uniform(1, 5, size=(12, 2))
    serial = integrate_many(system, ics, workers=1)
    parallel = integrate_many(system, ics, workers=4)
    for a, b in zip(serial, parallel):
        np.testing.assert_array_equal(a.states, b.states)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-2.5, max_value=2.5, allow_nan=False))
def test_eval_is_deterministic(x):
    system = get_system("xcosx")
    assert eval_rhs(system, 0.3, [x])[0] == eval_rhs(system, 0.3, [x])[0]


def test_oracle_systems_are_separate():
    assert [s.id for s in oracle_systems()] == ["decay", "still"]
