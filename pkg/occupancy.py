"""
Occupancy generation for the lighting simulator.

Builds one-year per-timestep occupancy series for the two household profiles:
the preset schedule (binary, holiday-blind), the expected motion-detection
occupancy (probabilities), and seeded stochastic samples with a sensor hold
time.
"""

import datetime
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from errors import ConfigError
from model import ProfileId


logger = logging.getLogger(__name__)

MINUTES_PER_DAY = 1440
DAYS_PER_YEAR = 365
BLOCK_GRANULARITY = 30  # minutes

# motion sensors see nobody while the family sleeps
SLEEP_START = 22 * 60
SLEEP_END = 6 * 60

DEFAULT_HOLD_MINUTES = 10
REFERENCE_YEAR = 2018  # non-leap, starts on a Monday


def parse_clock(text: str) -> int:
    """Convert 'HH:MM' (00:00-24:00) to minutes after midnight."""
    try:
        hours, minutes = (int(part) for part in text.split(":"))
    except (ValueError, AttributeError):
        raise ConfigError(f"invalid clock time {text!r}, expected HH:MM")
    total = hours * 60 + minutes
    if not 0 <= minutes < 60 or not 0 <= total <= MINUTES_PER_DAY:
        raise ConfigError(f"clock time {text!r} outside 00:00-24:00")
    return total


def check_timestep(timestep_minutes: int):
    if timestep_minutes <= 0 or BLOCK_GRANULARITY % timestep_minutes:
        raise ConfigError(
            f"timestep of {timestep_minutes} min does not divide {BLOCK_GRANULARITY} minutes", "timestep")


class Block(NamedTuple):
    start: int  # minutes after midnight
    end: int
    occupancy: float


@dataclass(frozen=True)
class DailyPattern:
    """Occupancy probability blocks tiling one day."""

    blocks: Tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(Block(*b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        cursor = 0
        for block in blocks:
            if block.start != cursor:
                raise ConfigError(f"pattern blocks must tile the day; gap or overlap at minute {cursor}")
            if block.end <= block.start:
                raise ConfigError(f"pattern block {block.start}-{block.end} is empty")
            if block.start % BLOCK_GRANULARITY or block.end % BLOCK_GRANULARITY:
                raise ConfigError("pattern block boundaries must fall on 30-minute marks")
            if not 0.0 <= block.occupancy <= 1.0:
                raise ConfigError(f"occupancy {block.occupancy} outside [0, 1]")
            cursor = block.end
        if cursor != MINUTES_PER_DAY:
            raise ConfigError("pattern blocks must end at 24:00")

    @classmethod
    def from_clock(cls, rows: Sequence[Tuple[str, str, float]]) -> "DailyPattern":
        return cls(tuple(Block(parse_clock(a), parse_clock(b), float(p)) for a, b, p in rows))

    def to_steps(self, timestep_minutes: int) -> np.ndarray:
        starts = np.arange(0, MINUTES_PER_DAY, timestep_minutes)
        values = np.zeros(len(starts))
        for block in self.blocks:
            values[(starts >= block.start) & (starts < block.end)] = block.occupancy
        return values

    def daily_hours(self) -> float:
        return sum((b.end - b.start) * b.occupancy for b in self.blocks) / 60.0


def _interval_steps(intervals: Sequence[Tuple[int, int]], timestep_minutes: int) -> np.ndarray:
    starts = np.arange(0, MINUTES_PER_DAY, timestep_minutes)
    values = np.zeros(len(starts))
    for start, end in intervals:
        values[(starts >= start) & (starts < end)] = 1.0
    return values


@dataclass(frozen=True)
class Profile:
    id: ProfileId
    weekday: DailyPattern
    weekend: DailyPattern
    schedule_weekday: Tuple[Tuple[int, int], ...]
    schedule_weekend: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for name in ("schedule_weekday", "schedule_weekend"):
            intervals = tuple(sorted(tuple(i) for i in getattr(self, name)))
            for start, end in intervals:
                if not 0 <= start < end <= MINUTES_PER_DAY:
                    raise ConfigError(f"{self.id.value}: invalid schedule interval {start}-{end}")
            for (_, end), (start, _) in zip(intervals, intervals[1:]):
                if start < end:
                    raise ConfigError(f"{self.id.value}: overlapping schedule intervals")
            object.__setattr__(self, name, intervals)


@dataclass(frozen=True)
class HolidayCalendar:
    """Two 15-day absences, one in winter and one in summer."""

    winter_start: datetime.date = datetime.date(REFERENCE_YEAR, 1, 1)
    summer_start: datetime.date = datetime.date(REFERENCE_YEAR, 8, 1)
    length_days: int = 15

    def __post_init__(self):
        if self.length_days < 0:
            raise ConfigError("holiday length must be >= 0")
        winter = set(self._block_days(self.winter_start))
        summer = set(self._block_days(self.summer_start))
        if winter & summer:
            raise ConfigError("winter and summer holiday blocks overlap")

    def _block_days(self, start: datetime.date) -> List[int]:
        first = start.replace(year=REFERENCE_YEAR).timetuple().tm_yday - 1
        return [(first + k) % DAYS_PER_YEAR for k in range(self.length_days)]

    def day_mask(self) -> np.ndarray:
        """Boolean array over the 365 days, True on holidays."""
        mask = np.zeros(DAYS_PER_YEAR, dtype=bool)
        mask[self._block_days(self.winter_start)] = True
        mask[self._block_days(self.summer_start)] = True
        return mask


NO_HOLIDAYS = HolidayCalendar(length_days=0)


@dataclass(frozen=True, eq=False)
class OccupancySeries:
    """Per-timestep occupancy: fractions (expected) or 0/1 (stochastic, schedule)."""

    timestep_minutes: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        expected = DAYS_PER_YEAR * MINUTES_PER_DAY // self.timestep_minutes
        if len(values) != expected:
            raise ConfigError(f"occupancy series has {len(values)} steps, expected {expected}")
        if np.any(values < 0) or np.any(values > 1):
            raise ConfigError("occupancy values must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def annual_on_hours(series: OccupancySeries) -> float:
    return float(series.values.sum() * series.timestep_minutes / 60.0)


def weekend_days(start_weekday: int = 0) -> np.ndarray:
    """Boolean array over the year, True on Saturdays and Sundays (0 = Monday)."""
    return (np.arange(DAYS_PER_YEAR) + start_weekday) % 7 >= 5


def _sleep_mask(timestep_minutes: int) -> np.ndarray:
    starts = np.arange(0, MINUTES_PER_DAY, timestep_minutes)
    return (starts >= SLEEP_START) | (starts < SLEEP_END)


def _tile_days(weekday: np.ndarray, weekend: np.ndarray, start_weekday: int) -> np.ndarray:
    days = np.where(weekend_days(start_weekday)[:, None], weekend[None, :], weekday[None, :])
    return days.reshape(-1)


def _expected_values(profile: Profile, calendar: HolidayCalendar, timestep_minutes: int,
                     start_weekday: int) -> np.ndarray:
    sleep = _sleep_mask(timestep_minutes)
    weekday = np.where(sleep, 0.0, profile.weekday.to_steps(timestep_minutes))
    weekend = np.where(sleep, 0.0, profile.weekend.to_steps(timestep_minutes))
    values = _tile_days(weekday, weekend, start_weekday)
    steps_per_day = MINUTES_PER_DAY // timestep_minutes
    holidays = np.repeat(calendar.day_mask(), steps_per_day)
    values[holidays] = 0.0
    return values


def expected_series(profile: Profile, calendar: HolidayCalendar, timestep_minutes: int,
                    start_weekday: int = 0) -> OccupancySeries:
    """
    Expected motion-detection occupancy: the block probability for each step.

    Holidays and sleeping hours (22:00-06:00) are vacant.
    """
    check_timestep(timestep_minutes)
    values = _expected_values(profile, calendar, timestep_minutes, start_weekday)
    return OccupancySeries(timestep_minutes=timestep_minutes, values=values)


def schedule_series(profile: Profile, timestep_minutes: int, start_weekday: int = 0) -> OccupancySeries:
    """
    Preset on/off schedule. A schedule knows nothing about holidays, so
    every day of the year follows it.
    """
    check_timestep(timestep_minutes)
    weekday = _interval_steps(profile.schedule_weekday, timestep_minutes)
    weekend = _interval_steps(profile.schedule_weekend, timestep_minutes)
    values = _tile_days(weekday, weekend, start_weekday)
    return OccupancySeries(timestep_minutes=timestep_minutes, values=values)


def stochastic_series(profile: Profile, calendar: HolidayCalendar, timestep_minutes: int,
                      seed: int, hold_time_minutes: int = DEFAULT_HOLD_MINUTES,
                      start_weekday: int = 0) -> OccupancySeries:
    """
    Sampled motion-detection occupancy.

    Each step is occupied with its block probability; a positive sample keeps
    the lights on for hold_time_minutes (the sensor timeout), counted from the
    start of that step. Holidays stay vacant.

    Args:
        profile: Household profile
        calendar: Holiday calendar
        timestep_minutes: Step length, must divide 30 minutes
        seed: Random seed; identical seeds give identical series
        hold_time_minutes: Sensor timeout, at least one timestep
        start_weekday: Weekday of January 1st (0 = Monday)
    """
    check_timestep(timestep_minutes)
    if hold_time_minutes < timestep_minutes:
        raise ConfigError("hold time must be at least one timestep", "hold_time")

    probabilities = _expected_values(profile, calendar, timestep_minutes, start_weekday)
    rng = np.random.default_rng(seed)
    samples = (rng.random(len(probabilities)) < probabilities).astype(float)

    hold_steps = math.ceil(hold_time_minutes / timestep_minutes)
    if hold_steps > 1:
        held = np.convolve(samples, np.ones(hold_steps))[:len(samples)]
        samples = (held > 0).astype(float)

    steps_per_day = MINUTES_PER_DAY // timestep_minutes
    samples[np.repeat(calendar.day_mask(), steps_per_day)] = 0.0
    logger.debug("stochastic occupancy %s seed=%d: %.1f h on", profile.id.value, seed,
                 samples.sum() * timestep_minutes / 60.0)
    return OccupancySeries(timestep_minutes=timestep_minutes, values=samples)


_PROFILE_1_DAY = DailyPattern.from_clock([
    ("00:00", "06:00", 0.0),
    ("06:00", "07:00", 0.5),
    ("07:00", "08:00", 0.75),
    ("08:00", "21:30", 1.0),
    ("21:30", "22:00", 0.75),
    ("22:00", "24:00", 0.0),
])

_PROFILE_2_WORKDAY = DailyPattern.from_clock([
    ("00:00", "06:00", 0.0),
    ("06:00", "07:00", 0.5),
    ("07:00", "07:30", 0.75),
    ("07:30", "08:00", 1.0),
    ("08:00", "18:00", 0.0),
    ("18:00", "18:30", 0.5),
    ("18:30", "19:00", 0.75),
    ("19:00", "21:30", 1.0),
    ("21:30", "22:00", 0.75),
    ("22:00", "24:00", 0.0),
])

_PROFILE_1_SCHEDULE = ((6 * 60, 22 * 60),)
_PROFILE_2_SCHEDULE = ((6 * 60, 8 * 60), (18 * 60, 22 * 60))

# Profile 1: someone is home all day, every day.
PROFILE_1 = Profile(
    id=ProfileId.PROFILE_1,
    weekday=_PROFILE_1_DAY,
    weekend=_PROFILE_1_DAY,
    schedule_weekday=_PROFILE_1_SCHEDULE,
    schedule_weekend=_PROFILE_1_SCHEDULE,
)

# Profile 2: house empty during working hours on weekdays, weekends as Profile 1.
PROFILE_2 = Profile(
    id=ProfileId.PROFILE_2,
    weekday=_PROFILE_2_WORKDAY,
    weekend=_PROFILE_1_DAY,
    schedule_weekday=_PROFILE_2_SCHEDULE,
    schedule_weekend=_PROFILE_1_SCHEDULE,
)

BUILTIN_PROFILES = {
    ProfileId.PROFILE_1: PROFILE_1,
    ProfileId.PROFILE_2: PROFILE_2,
}
