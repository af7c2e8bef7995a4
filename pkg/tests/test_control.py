import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from control import (ControlInputs, PowerFraction, dim_factor, dim_factors, interior_daylight, power_fraction,
                     power_fractions)
from errors import DomainError
from model import ControlFeatures, DaylightMode, OccupancyMode


lux = st.floats(min_value=0.0, max_value=1e5, allow_nan=False)
setpoints = st.floats(min_value=1.0, max_value=2000.0, allow_nan=False)


# ---------------------------------------------------------------------------
# Daylight
# ---------------------------------------------------------------------------
def test_interior_daylight():
    assert interior_daylight(20000.0, 0.02) == pytest.approx(400.0)
    np.testing.assert_allclose(interior_daylight(np.array([0.0, 5000.0]), 0.04), [0.0, 200.0])


def test_interior_daylight_domain():
    with pytest.raises(DomainError):
        interior_daylight(1000.0, 1.2)
    with pytest.raises(DomainError):
        interior_daylight(-1.0, 0.02)


def test_harvest_switches_at_setpoint():
    assert float(dim_factor(DaylightMode.HARVEST, 400.0, 300.0)) == 0.0
    assert float(dim_factor(DaylightMode.HARVEST, 300.0, 300.0)) == 0.0
    assert float(dim_factor(DaylightMode.HARVEST, 299.0, 300.0)) == 1.0


def test_dimming_tops_up_missing_light():
    assert float(dim_factor(DaylightMode.HARVEST_DIM, 150.0, 300.0)) == pytest.approx(0.5)
    assert float(dim_factor(DaylightMode.HARVEST_DIM, 0.0, 300.0)) == 1.0
    assert float(dim_factor(DaylightMode.HARVEST_DIM, 900.0, 300.0)) == 0.0


def test_no_daylight_control_is_full_power():
    assert float(dim_factor(DaylightMode.NONE, 1e5, 300.0)) == 1.0


def test_zero_setpoint_rejected():
    with pytest.raises(DomainError):
        dim_factor(DaylightMode.HARVEST_DIM, 100.0, 0.0)


@given(daylight=lux, setpoint=setpoints)
def test_dimming_never_uses_more_than_switching(daylight, setpoint):
    dim = float(dim_factor(DaylightMode.HARVEST_DIM, daylight, setpoint))
    harvest = float(dim_factor(DaylightMode.HARVEST, daylight, setpoint))
    assert 0.0 <= dim <= harvest <= 1.0


@given(a=lux, b=lux, setpoint=setpoints)
def test_dimming_decreases_with_daylight(a, b, setpoint):
    low, high = sorted((a, b))
    assert float(dim_factor(DaylightMode.HARVEST_DIM, high, setpoint)) <= \
        float(dim_factor(DaylightMode.HARVEST_DIM, low, setpoint))


@given(daylight=st.floats(min_value=0.0, max_value=1000.0))
def test_huge_setpoint_keeps_lamps_on(daylight):
    assert float(dim_factor(DaylightMode.HARVEST, daylight, 1e9)) == 1.0
    assert float(dim_factor(DaylightMode.HARVEST_DIM, daylight, 1e9)) == pytest.approx(1.0 - daylight / 1e9, rel=1e-12)


@given(values=st.lists(lux, min_size=1, max_size=50), setpoint=setpoints)
def test_vector_form_matches_scalar_form(values, setpoint):
    for mode in DaylightMode:
        vector = dim_factors(mode, np.array(values), setpoint)
        scalar = [float(dim_factor(mode, v, setpoint)) for v in values]
        np.testing.assert_allclose(vector, scalar)


# ---------------------------------------------------------------------------
# Hysteresis
# ---------------------------------------------------------------------------
SEQUENCE = np.array([0.0, 310.0, 350.0, 310.0, 290.0, 310.0])


def test_hysteresis_holds_state_inside_band():
    result = dim_factors(DaylightMode.HARVEST, SEQUENCE, 300.0, hysteresis=40.0)
    np.testing.assert_array_equal(result, [1, 1, 0, 0, 1, 1])


def test_without_hysteresis_switches_at_setpoint():
    result = dim_factors(DaylightMode.HARVEST, SEQUENCE, 300.0)
    np.testing.assert_array_equal(result, [1, 0, 0, 0, 1, 0])


def test_hysteresis_starts_on_inside_band():
    result = dim_factors(DaylightMode.HARVEST, np.array([320.0, 320.0]), 300.0, hysteresis=40.0)
    np.testing.assert_array_equal(result, [1, 1])


def test_negative_hysteresis_rejected():
    with pytest.raises(DomainError):
        dim_factors(DaylightMode.HARVEST, SEQUENCE, 300.0, hysteresis=-1.0)


# ---------------------------------------------------------------------------
# Power fraction
# ---------------------------------------------------------------------------
def test_occupancy_gate_scales_dimming():
    features = ControlFeatures(DaylightMode.HARVEST_DIM, OccupancyMode.MOTION_DETECTION)
    assert float(power_fraction(features, 0.5, PowerFraction(0.4))) == pytest.approx(0.2)


def test_gate_ignored_without_occupancy_control():
    features = ControlFeatures(DaylightMode.HARVEST_DIM)
    assert float(power_fraction(features, 0.0, PowerFraction(0.4))) == pytest.approx(0.4)


def test_baseline_draws_full_power():
    assert float(power_fraction(ControlFeatures(), 1.0, PowerFraction(1.0))) == 1.0


def test_vector_power_fractions():
    dims = np.array([1.0, 0.5, 0.0])
    md = ControlFeatures(occupancy_mode=OccupancyMode.MOTION_DETECTION)
    np.testing.assert_allclose(power_fractions(md, np.array([0.0, 1.0, 1.0]), dims), [0.0, 0.5, 0.0])
    np.testing.assert_allclose(power_fractions(ControlFeatures(), None, dims), dims)


@pytest.mark.parametrize("value", [-0.1, 1.1])
def test_power_fraction_range(value):
    with pytest.raises(DomainError):
        PowerFraction(value)


def test_control_inputs_validated():
    with pytest.raises(DomainError):
        ControlInputs(occupancy=1.5, interior_daylight=0.0, setpoint=300.0)
