import datetime

import numpy as np
import pytest

from errors import ConfigError
from occupancy import (NO_HOLIDAYS, PROFILE_1, PROFILE_2, DailyPattern, HolidayCalendar, annual_on_hours,
                       expected_series, parse_clock, schedule_series, stochastic_series, weekend_days)


STEPS_PER_DAY = 144  # 10-minute steps
CALENDAR = HolidayCalendar()


def _at(series, day, clock):
    steps_per_day = 1440 // series.timestep_minutes
    return series.values[day * steps_per_day + parse_clock(clock) // series.timestep_minutes]


def _day(series, day):
    steps_per_day = 1440 // series.timestep_minutes
    return series.values[day * steps_per_day:(day + 1) * steps_per_day]


# ---------------------------------------------------------------------------
# Expected mode
# ---------------------------------------------------------------------------
def test_profile_1_fully_occupied_at_eight():
    series = expected_series(PROFILE_1, CALENDAR, 10)
    assert _at(series, 20, "08:00") == 1.0
    assert _at(series, 20, "06:30") == 0.5
    assert _at(series, 20, "21:40") == 0.75


def test_profile_2_vacant_at_noon_on_weekdays():
    series = expected_series(PROFILE_2, CALENDAR, 10)
    # day 16 is a Wednesday when the year starts on Monday
    assert _at(series, 16, "12:00") == 0.0
    assert _at(series, 16, "19:30") == 1.0


def test_profile_1_daily_hours():
    assert PROFILE_1.weekday.daily_hours() == pytest.approx(15.125)
    assert PROFILE_2.weekday.daily_hours() == pytest.approx(4.875)


def test_profile_1_expected_annual_hours():
    series = expected_series(PROFILE_1, CALENDAR, 10)
    assert annual_on_hours(series) == pytest.approx((365 - 30) * 15.125, rel=1e-12)
    assert annual_on_hours(series) == pytest.approx(5066.875, rel=1e-12)


def test_nights_are_vacant():
    series = expected_series(PROFILE_1, NO_HOLIDAYS, 10)
    for day in range(7):
        assert _at(series, day, "23:00") == 0.0
        assert _at(series, day, "03:00") == 0.0


def test_holidays_are_vacant():
    series = expected_series(PROFILE_1, CALENDAR, 10)
    for day in list(range(15)) + list(range(212, 227)):
        assert not _day(series, day).any()
    assert _day(series, 15).any()
    assert _day(series, 227).any()


def test_expected_never_exceeds_schedule():
    for profile in (PROFILE_1, PROFILE_2):
        expected = expected_series(profile, NO_HOLIDAYS, 10).values
        schedule = schedule_series(profile, 10).values
        assert np.all(expected <= schedule)


def test_profile_2_weekend_equals_profile_1():
    p1 = expected_series(PROFILE_1, CALENDAR, 10)
    p2 = expected_series(PROFILE_2, CALENDAR, 10)
    for day in np.flatnonzero(weekend_days(0)):
        np.testing.assert_array_equal(_day(p1, day), _day(p2, day))


def test_start_weekday_moves_weekends():
    # starting on Saturday makes day 0 a weekend day
    series = expected_series(PROFILE_2, NO_HOLIDAYS, 10, start_weekday=5)
    assert _at(series, 0, "12:00") == 1.0
    assert _at(series, 2, "12:00") == 0.0


def test_thirty_minute_and_one_minute_steps_agree():
    coarse = annual_on_hours(expected_series(PROFILE_2, CALENDAR, 30))
    fine = annual_on_hours(expected_series(PROFILE_2, CALENDAR, 1))
    assert coarse == pytest.approx(fine, rel=1e-12)


@pytest.mark.parametrize("timestep", [0, 7, 20, 45])
def test_timestep_must_divide_thirty_minutes(timestep):
    with pytest.raises(ConfigError):
        expected_series(PROFILE_1, CALENDAR, timestep)


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------
def test_profile_1_schedule_two_thirds_of_every_day():
    series = schedule_series(PROFILE_1, 10)
    assert annual_on_hours(series) == pytest.approx(365 * 16)
    assert series.values.mean() == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_profile_2_schedule_hours():
    series = schedule_series(PROFILE_2, 10)
    assert _day(series, 0).sum() / 6 == pytest.approx(6.0)
    week = series.values[:7 * STEPS_PER_DAY].sum() / 6
    assert week == pytest.approx(62.0)


def test_schedule_ignores_holidays():
    series = schedule_series(PROFILE_1, 10)
    assert _at(series, 3, "12:00") == 1.0


# ---------------------------------------------------------------------------
# Stochastic mode
# ---------------------------------------------------------------------------
def test_same_seed_same_series():
    a = stochastic_series(PROFILE_1, CALENDAR, 10, seed=11)
    b = stochastic_series(PROFILE_1, CALENDAR, 10, seed=11)
    np.testing.assert_array_equal(a.values, b.values)


def test_different_seeds_differ():
    a = stochastic_series(PROFILE_1, CALENDAR, 10, seed=1)
    b = stochastic_series(PROFILE_1, CALENDAR, 10, seed=2)
    assert not np.array_equal(a.values, b.values)


def test_stochastic_values_are_binary():
    series = stochastic_series(PROFILE_2, CALENDAR, 10, seed=3)
    assert set(np.unique(series.values)) <= {0.0, 1.0}


@pytest.mark.parametrize("seed", [0, 5, 99])
def test_certain_block_always_occupied(seed):
    series = stochastic_series(PROFILE_1, CALENDAR, 10, seed=seed, hold_time_minutes=10)
    start, end = parse_clock("08:00") // 10, parse_clock("21:30") // 10
    for day in (20, 100, 300):
        assert _day(series, day)[start:end].all()


def test_holiday_block_always_vacant():
    series = stochastic_series(PROFILE_1, CALENDAR, 10, seed=4, hold_time_minutes=30)
    assert not series.values[:15 * STEPS_PER_DAY].any()


def test_hold_time_extends_occupancy():
    short = stochastic_series(PROFILE_2, CALENDAR, 10, seed=8, hold_time_minutes=10)
    long = stochastic_series(PROFILE_2, CALENDAR, 10, seed=8, hold_time_minutes=60)
    assert np.all(long.values >= short.values)
    assert long.values.sum() > short.values.sum()


def test_hold_shorter_than_timestep_rejected():
    with pytest.raises(ConfigError):
        stochastic_series(PROFILE_1, CALENDAR, 10, seed=0, hold_time_minutes=5)


def test_sample_mean_converges_to_expected():
    expected = expected_series(PROFILE_1, CALENDAR, 30).values.mean()
    means = [stochastic_series(PROFILE_1, CALENDAR, 30, seed=seed, hold_time_minutes=30).values.mean()
             for seed in range(1000)]
    assert np.mean(means) == pytest.approx(expected, rel=0.01)


# ---------------------------------------------------------------------------
# Patterns and calendars
# ---------------------------------------------------------------------------
def test_pattern_must_tile_the_day():
    with pytest.raises(ConfigError, match="tile"):
        DailyPattern.from_clock([("00:00", "12:00", 0.0), ("13:00", "24:00", 0.0)])


def test_pattern_must_align_to_half_hours():
    with pytest.raises(ConfigError, match="30-minute"):
        DailyPattern.from_clock([("00:00", "12:15", 0.0), ("12:15", "24:00", 0.0)])


def test_pattern_probability_range():
    with pytest.raises(ConfigError):
        DailyPattern.from_clock([("00:00", "24:00", 1.5)])


@pytest.mark.parametrize("text", ["6am", "25:00", "12:60"])
def test_bad_clock_times(text):
    with pytest.raises(ConfigError):
        parse_clock(text)


def test_default_calendar_has_thirty_days():
    mask = HolidayCalendar().day_mask()
    assert mask.sum() == 30
    assert mask[0] and mask[14] and not mask[15]
    assert mask[212] and mask[226] and not mask[227]


def test_overlapping_holidays_rejected():
    with pytest.raises(ConfigError, match="overlap"):
        HolidayCalendar(winter_start=datetime.date(2018, 1, 1), summer_start=datetime.date(2018, 1, 10))


def test_holiday_block_wraps_year_end():
    calendar = HolidayCalendar(winter_start=datetime.date(2018, 12, 25))
    mask = calendar.day_mask()
    assert mask[358] and mask[364] and mask[0] and mask[7] and not mask[8]
