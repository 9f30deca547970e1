"""Tests for noise, odd extension, smoothing splines and dataset assembly"""

import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.interpolate import CubicSpline

from odelip.core.dataset import NoiseSpec
from odelip.core.dynamics import RhsSystem, Trajectory
from odelip.core.errors import InputError
from odelip.data.derivatives import estimate_derivatives, odd_extend
from odelip.data.io import read_dataset, sidecar_path, write_dataset
from odelip.data.noise import add_noise, mean_range, mean_ranges, sample_initial_conditions
from odelip.data.pipeline import EXTEND_THEN_SMOOTH, build_dataset, split_index
from odelip.data.smoothing import default_roughness, fit_smoothing_curve
from odelip.systems.catalog import eval_rhs_batch, get_system
from odelip.systems.integrator import integrate


def trajectory_of(values) -> Trajectory:
    values = np.asarray(values, dtype=np.float64).reshape(len(values), -1)
    return Trajectory(times=np.arange(len(values)) * 0.5, states=values, ic=values[0].copy())


@pytest.fixture(scope="module")
def xcosx_dataset():
    return build_dataset(get_system("xcosx"), NoiseSpec(level=0.0, seed=1), split_seed=2, ic_seed=0)


# Initial conditions

def test_initial_conditions_in_box():
    ics = sample_initial_conditions(get_system("xcosx"), seed=0)
    assert ics.shape == (200, 1)
    assert np.all(ics >= -2.5) and np.all(ics <= 2.5)


def test_initial_conditions_degenerate_box():
    system = replace(get_system("xcosx"), ic_box=((0.3, 0.3),))
    np.testing.assert_array_equal(sample_initial_conditions(system, seed=5), 0.3)


def test_initial_conditions_mean():
    system = replace(get_system("xcosx"), ic_box=((0.0, 1.0),))
    ics = sample_initial_conditions(system, seed=11, n=100_000)
    assert abs(ics.mean() - 0.5) < 0.01


def test_initial_conditions_deterministic_and_nonempty():
    system = get_system("lotka_volterra")
    np.testing.assert_array_equal(sample_initial_conditions(system, 4), sample_initial_conditions(system, 4))
    with pytest.raises(InputError):
        sample_initial_conditions(system, 4, n=0)


# Mean range and noise

def test_mean_range_examples():
    assert mean_range([trajectory_of([0.0, 1.0, 3.0])], 0) == 3.0
    assert mean_range([trajectory_of([0.0, 2.0, 1.0]), trajectory_of([1.0, 5.0, 2.0])], 0) == 3.0
    assert mean_range([trajectory_of([2.0, 2.0, 2.0])], 0) == 0.0


def test_mean_range_errors():
    with pytest.raises(InputError):
        mean_range([], 0)
    with pytest.raises(InputError):
        mean_range([trajectory_of([0.0, 1.0])], 1)


def test_zero_noise_is_identity():
    trajectories = [trajectory_of([0.0, 1.0, 3.0])]
    noisy = add_noise(trajectories, NoiseSpec(level=0.0, seed=3))
    assert noisy[0] is trajectories[0]


def test_noise_std_matches_level():
    ramp = np.linspace(0.0, 1.0, 1000)
    trajectories = [trajectory_of(ramp) for _ in range(1000)]
    noisy = add_noise(trajectories, NoiseSpec(level=0.01, seed=42))
    unit = np.concatenate([(n.states - t.states).ravel() for n, t in zip(noisy, trajectories)])
    assert unit.size == 1_000_000
    assert abs(unit.std() - 0.01) < 0.05 * 0.01


def test_noise_variance_reading():
    spec = NoiseSpec(level=0.0001, seed=0, param_is_variance=True)
    assert spec.sigma == pytest.approx(0.01)
    with pytest.raises(InputError):
        NoiseSpec(level=-0.1)


def test_constant_trajectories_stay_unchanged():
    trajectories = [trajectory_of([1.5, 1.5, 1.5, 1.5]) for _ in range(3)]
    noisy = add_noise(trajectories, NoiseSpec(level=0.02, seed=9))
    for n, t in zip(noisy, trajectories):
        np.testing.assert_array_equal(n.states, t.states)


def test_noise_scales_with_trajectories():
    rng = np.random.default_rng(0)
    trajectories = [trajectory_of(rng.normal(size=(7, 2))) for _ in range(5)]
    doubled = [trajectory_of(2.0 * t.states) for t in trajectories]
    np.testing.assert_array_equal(mean_ranges(doubled), 2.0 * mean_ranges(trajectories))
    spec = NoiseSpec(level=0.01, seed=17)
    for a, b in zip(add_noise(trajectories, spec), add_noise(doubled, spec)):
        np.testing.assert_array_equal(b.states, 2.0 * a.states)


def test_noisy_ic_is_first_row():
    trajectories = [trajectory_of([0.0, 1.0, 3.0])]
    noisy = add_noise(trajectories, NoiseSpec(level=0.02, seed=1))
    np.testing.assert_array_equal(noisy[0].ic, noisy[0].states[0])


# Odd extension and differences

def test_odd_extend_examples():
    np.testing.assert_array_equal(odd_extend([1.0, 2.0, 4.0], 2), [-2.0, 0.0, 1.0, 2.0, 4.0, 6.0, 7.0])
    np.testing.assert_array_equal(odd_extend([0.0, 1.0, 2.0], 1), [-1.0, 0.0, 1.0, 2.0, 3.0])
    np.testing.assert_array_equal(odd_extend([3.0, 3.0, 3.0], 2), [3.0] * 7)


def test_odd_extend_too_short():
    with pytest.raises(InputError):
        odd_extend([1.0, 2.0], 2)


def test_odd_extend_columns():
    values = np.column_stack([[1.0, 2.0, 4.0], [0.0, 1.0, 2.0]])
    extended = odd_extend(values, 2)
    np.testing.assert_array_equal(extended[:, 0], odd_extend(values[:, 0], 2))
    np.testing.assert_array_equal(extended[:, 1], odd_extend(values[:, 1], 2))


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.integers(min_value=3, max_value=12),
)
def test_odd_extension_of_linear_data_is_linear(intercept, slope, m):
    values = intercept + slope * np.arange(m, dtype=np.float64)
    extended = odd_extend(values, 2)
    expected = intercept + slope * np.arange(-2, m + 2, dtype=np.float64)
    np.testing.assert_allclose(extended, expected, rtol=0, atol=1e-9 * (1 + abs(intercept) + abs(slope) * m))


def test_central_difference_exact_for_quadratics():
    dt = 0.5
    t = np.arange(7) * dt
    derivative = estimate_derivatives(odd_extend(t ** 2), dt)
    assert derivative[2] == 2.0
    np.testing.assert_allclose(derivative[1:-1], 2 * t[1:-1], rtol=0, atol=1e-10)


def test_central_difference_constant():
    np.testing.assert_array_equal(estimate_derivatives(odd_extend(np.full(5, 4.2)), 0.5), 0.0)


def test_central_difference_sine_bound():
    dt = 0.5
    t = np.arange(13) * dt
    derivative = estimate_derivatives(odd_extend(np.sin(t)), dt)
    # interior points plus t = 0, where the odd reflection of sin is exact
    assert np.max(np.abs(derivative[:-1] - np.cos(t[:-1]))) <= dt ** 2 / 6


def test_central_difference_endpoint_bound():
    # at the ends the odd reflection turns the central quotient one-sided
    dt = 0.1
    t = np.arange(13) * dt
    derivative = estimate_derivatives(odd_extend(np.exp(t)), dt)
    left, right = abs(derivative[0] - 1.0), abs(derivative[-1] - np.exp(t[-1]))
    assert derivative[0] == pytest.approx((np.exp(dt) - 1.0) / dt)
    assert left <= dt * np.exp(t[1]) / 2
    assert right <= dt * np.exp(t[-1]) / 2
    assert left > dt ** 2 and right > dt ** 2


def test_estimate_derivatives_length_check():
    with pytest.raises(InputError):
        estimate_derivatives([1.0, 2.0, 3.0], 0.5, p=2)
    with pytest.raises(InputError):
        estimate_derivatives(odd_extend([1.0, 2.0, 3.0]), 0.0)


# Smoothing splines

def test_interpolating_spline_hits_knots():
    rng = np.random.default_rng(1)
    t = np.cumsum(rng.uniform(0.2, 1.0, size=12))
    y = rng.normal(size=12)
    curve = fit_smoothing_curve(t, y, 0.0)
    np.testing.assert_allclose(curve(t), y, rtol=0, atol=1e-10)


def test_interpolating_spline_is_the_natural_spline():
    t = np.linspace(0.0, 3.0, 7)
    y = np.cos(t)
    curve = fit_smoothing_curve(t, y, 0.0)
    fine = np.linspace(0.0, 3.0, 301)
    np.testing.assert_allclose(curve(fine), CubicSpline(t, y, bc_type="natural")(fine), rtol=0, atol=1e-10)


@pytest.mark.parametrize("roughness", [0.0, 0.1, 100.0])
def test_spline_reproduces_lines(roughness):
    t = np.linspace(0.1, 2.0, 9)
    y = 3.0 - 2.0 * t
    curve = fit_smoothing_curve(t, y, roughness)
    fine = np.linspace(0.1, 2.0, 200)
    np.testing.assert_allclose(curve(fine), 3.0 - 2.0 * fine, rtol=0, atol=1e-10)


def test_spline_extrapolates_linearly():
    t = np.linspace(0.0, 3.0, 7)
    curve = fit_smoothing_curve(t, t ** 3, 0.0)
    slope = curve.derivative(3.0)
    assert curve(3.5) == pytest.approx(curve(3.0) + 0.5 * slope)
    assert curve.coefficients.shape == (4, 6)


def test_default_roughness_denoises_sine():
    rng = np.random.default_rng(7)
    t = np.linspace(0.0, 2 * np.pi, 60)
    clean = np.sin(t)
    noisy = clean + rng.normal(0.0, 0.05, size=t.shape)
    lam = default_roughness(t, noisy, 0.05)
    assert lam > 0
    smoothed = fit_smoothing_curve(t, noisy, lam)(t)
    assert np.sqrt(np.mean((smoothed - clean) ** 2)) < np.sqrt(np.mean((noisy - clean) ** 2))


def test_default_roughness_noiseless_is_zero():
    t = np.linspace(0.0, 1.0, 5)
    assert default_roughness(t, t ** 2, 0.0) == 0.0


def test_spline_input_validation():
    with pytest.raises(InputError):
        fit_smoothing_curve([0.0, 2.0, 1.0, 3.0], [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(InputError):
        fit_smoothing_curve([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    with pytest.raises(InputError):
        fit_smoothing_curve([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0, 3.0], roughness=-1.0)


# Dataset assembly

def test_xcosx_dataset_counts(xcosx_dataset):
    assert xcosx_dataset.size == 1400
    assert len(xcosx_dataset.train) == 1120
    assert len(xcosx_dataset.test) == 280
    assert xcosx_dataset.train.inputs.shape == (1120, 2)


def test_split_is_a_partition(xcosx_dataset):
    combined = np.concatenate([xcosx_dataset.train_index, xcosx_dataset.test_index])
    np.testing.assert_array_equal(np.sort(combined), np.arange(1400))


@pytest.mark.parametrize("n", [5, 10, 11, 1400])
def test_split_fraction(n):
    train, test = split_index(n, split_seed=0)
    assert abs(len(train) - 0.8 * n) <= 1
    assert len(train) + len(test) == n


def test_dataset_is_deterministic(xcosx_dataset):
    again = build_dataset(get_system("xcosx"), NoiseSpec(level=0.0, seed=1), split_seed=2, ic_seed=0)
    np.testing.assert_array_equal(again.train.inputs, xcosx_dataset.train.inputs)
    np.testing.assert_array_equal(again.train.targets, xcosx_dataset.train.targets)
    np.testing.assert_array_equal(again.test.targets, xcosx_dataset.test.targets)


def test_noiseless_interior_targets_match_rhs():
    decay = get_system("decay")
    dataset = build_dataset(decay, NoiseSpec(level=0.0), split_seed=0, ic_seed=3)
    inputs = np.vstack([dataset.train.inputs, dataset.test.inputs])
    targets = np.vstack([dataset.train.targets, dataset.test.targets])
    interior = inputs[:, 0] == 0.5
    assert interior.any()
    truth = eval_rhs_batch(decay, inputs[interior])
    # third derivative of x0 exp(-t) is bounded by x0 on [0, 1]
    bound = decay.dt ** 2 / 6 * np.abs(inputs[interior, 1]) * np.exp(0.5) + 1e-8
    assert np.all(np.abs(targets[interior, 0] - truth[:, 0]) <= bound)


def test_row_order_follows_trajectories():
    decay = get_system("decay")
    dataset = build_dataset(decay, NoiseSpec(level=0.0), split_seed=0, ic_seed=3)
    ics = sample_initial_conditions(decay, seed=3)
    trajectory = integrate(decay, ics[1])
    h = 1 + 1 * decay.n_times  # j = 1 on trajectory i = 1
    rows = np.vstack([dataset.train.inputs, dataset.test.inputs])
    positions = np.concatenate([dataset.train_index, dataset.test_index])
    row = rows[np.flatnonzero(positions == h)[0]]
    np.testing.assert_array_equal(row, [trajectory.times[1], trajectory.states[1, 0]])


def test_noisy_inputs_are_unsmoothed_samples():
    system = replace(get_system("xcosx"), n_ic=20)
    clean = build_dataset(system, NoiseSpec(level=0.0, seed=1), split_seed=2)
    noisy = build_dataset(system, NoiseSpec(level=0.02, seed=1), split_seed=2)
    np.testing.assert_array_equal(noisy.train.inputs[:, 0], clean.train.inputs[:, 0])
    assert not np.array_equal(noisy.train.inputs[:, 1], clean.train.inputs[:, 1])
    assert np.all(np.isfinite(noisy.train.targets))


def test_extend_then_smooth_order():
    system = replace(get_system("lotka_volterra"), n_ic=10)
    dataset = build_dataset(system, NoiseSpec(level=0.01, seed=1), split_seed=2, smoothing_order=EXTEND_THEN_SMOOTH)
    assert dataset.size == 10 * system.n_times
    assert dataset.train.targets.shape[1] == 2
    assert np.all(np.isfinite(dataset.train.targets))
    with pytest.raises(InputError):
        build_dataset(system, NoiseSpec(level=0.01), split_seed=2, smoothing_order="sideways")


def test_dataset_csv_roundtrip(tmp_path, xcosx_dataset):
    path = write_dataset(xcosx_dataset, tmp_path / "dataset.csv")
    header = path.read_text().splitlines()[0]
    assert header == "t,x1,y1,split"
    assert len(path.read_text().splitlines()) == 1401
    
    meta = json.loads(sidecar_path(path).read_text())
    assert meta["system_id"] == "xcosx"
    assert meta["K"] == 200 and meta["M"] == 7
    assert meta["split_seed"] == 2
    
    loaded = read_dataset(path)
    np.testing.assert_array_equal(loaded.train.inputs, xcosx_dataset.train.inputs)
    np.testing.assert_array_equal(loaded.test.targets, xcosx_dataset.test.targets)
    assert loaded.provenance == xcosx_dataset.provenance


def test_dataset_csv_is_byte_identical(tmp_path, xcosx_dataset):
    a = write_dataset(xcosx_dataset, tmp_path / "a" / "dataset.csv")
    b = write_dataset(xcosx_dataset, tmp_path / "b" / "dataset.csv")
    assert a.read_bytes() == b.read_bytes()


def test_blank_system_trajectory_count():
    system = RhsSystem(id="flat", dim=1, rhs=lambda t, x: 0 * x, time_interval=(0.0, 2.0), dt=0.5,
                       ic_box=((0.0, 1.0),), n_ic=4)
    dataset = build_dataset(system, NoiseSpec(level=0.0), split_seed=0)
    assert dataset.size == 20
    np.testing.assert_array_equal(np.vstack([dataset.train.targets, dataset.test.targets]), 0.0)
