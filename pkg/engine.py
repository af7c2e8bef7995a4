"""
Annual lighting energy engine.

Steps one year per (location, scenario) cell, integrating lamp power times the
control power fraction over every zone, and sweeps the location x scenario grid
(optionally in parallel with joblib).
"""

import enum
import hashlib
import logging
import math
import time
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from typing import ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

import control
import occupancy
from errors import CellError, ConfigError
from model import CLEAR_SKY, HouseSpec, OccupancyMode, ProfileId, Scenario
from occupancy import HolidayCalendar, OccupancySeries, Profile
from weather import (DEFAULT_LUMINOUS_EFFICACY, DaylightSeries, clear_sky_series,
                     daylight_series_from_epw, read_epw)


logger = logging.getLogger(__name__)

MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


class SimulationMode(str, enum.Enum):
    EXPECTED = "expected"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class SimulationConfig:
    """
    Run-wide simulation settings.

    hold_time_minutes applies to stochastic motion detection only; expected
    mode uses the block probabilities directly.
    """

    year_hours: ClassVar[int] = 8760

    timestep_minutes: int = 10
    mode: SimulationMode = SimulationMode.EXPECTED
    seed: int = 0
    hold_time_minutes: int = occupancy.DEFAULT_HOLD_MINUTES
    start_weekday: int = 0
    hysteresis: float = 0.0
    keep_trace: bool = False

    def __post_init__(self):
        occupancy.check_timestep(self.timestep_minutes)
        object.__setattr__(self, "mode", SimulationMode(self.mode))
        if not 0 <= self.start_weekday <= 6:
            raise ConfigError("start_weekday must be 0 (Monday) to 6 (Sunday)", "start_weekday")
        if self.hysteresis < 0:
            raise ConfigError("hysteresis must be >= 0", "hysteresis")
        if self.mode is SimulationMode.STOCHASTIC and self.hold_time_minutes < self.timestep_minutes:
            raise ConfigError("hold time must be at least one timestep", "hold_time_minutes")

    @property
    def steps(self) -> int:
        return self.year_hours * 60 // self.timestep_minutes


@dataclass(frozen=True)
class OccupancyInputs:
    """Profiles and holidays shared by every cell of a sweep."""

    profiles: Dict[ProfileId, Profile] = field(default_factory=lambda: dict(occupancy.BUILTIN_PROFILES))
    calendar: HolidayCalendar = field(default_factory=HolidayCalendar)

    def profile(self, profile_id: ProfileId) -> Profile:
        try:
            return self.profiles[profile_id]
        except KeyError:
            raise ConfigError(f"no occupancy profile {profile_id.value!r} defined", "profiles")


@dataclass(frozen=True, eq=False)
class EnergyResult:
    annual_energy: float  # kWh
    per_zone_energy: Dict[str, float]
    monthly_energy: Tuple[float, ...]
    per_timestep_trace: Optional[np.ndarray] = None  # W


@dataclass(frozen=True)
class Site:
    """A house at one location together with that location's daylight year."""

    house: HouseSpec
    daylight: DaylightSeries

    @property
    def name(self) -> str:
        return self.house.location.name


def load_site(house: HouseSpec, timestep_minutes: int,
              luminous_efficacy: float = DEFAULT_LUMINOUS_EFFICACY) -> Site:
    """Build the daylight series for a house from its EPW file or the clear-sky model."""
    location = house.location
    if location.weather_source == CLEAR_SKY:
        daylight = clear_sky_series(location, timestep_minutes)
    else:
        _, records = read_epw(location.weather_source)
        daylight = daylight_series_from_epw(records, timestep_minutes, luminous_efficacy)
    logger.info("loaded daylight for %s from %s", location.name, location.weather_source)
    return Site(house=house, daylight=daylight)


def derive_seed(seed: int, *parts: str) -> int:
    """Stable child seed from a parent seed and labels (SHA-256, first 8 bytes)."""
    text = "|".join([str(seed), *parts])
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def _occupancy_gate(scenario: Scenario, profile: Profile, occ: OccupancyInputs,
                    config: SimulationConfig) -> OccupancySeries:
    mode = scenario.features.occupancy_mode
    if mode is OccupancyMode.SCHEDULE:
        return occupancy.schedule_series(profile, config.timestep_minutes, config.start_weekday)
    if config.mode is SimulationMode.EXPECTED:
        return occupancy.expected_series(profile, occ.calendar, config.timestep_minutes, config.start_weekday)
    return occupancy.stochastic_series(
        profile, occ.calendar, config.timestep_minutes,
        seed=derive_seed(config.seed, profile.id.value),
        hold_time_minutes=config.hold_time_minutes,
        start_weekday=config.start_weekday,
    )


def _monthly(power: np.ndarray, timestep_minutes: int) -> Tuple[float, ...]:
    steps_per_day = occupancy.MINUTES_PER_DAY // timestep_minutes
    daily = power.reshape(occupancy.DAYS_PER_YEAR, steps_per_day).sum(axis=1)
    month_starts = np.cumsum((0,) + MONTH_DAYS[:-1])
    monthly_wh = np.add.reduceat(daily, month_starts) * timestep_minutes / 60.0
    return tuple(float(v) / 1000.0 for v in monthly_wh)


def simulate_year(house: HouseSpec, scenario: Scenario, daylight: DaylightSeries,
                  occupancy_inputs: OccupancyInputs, config: SimulationConfig) -> EnergyResult:
    """
    Annual lighting energy of one house under one scenario.

    Args:
        house: Zones and location
        scenario: Control features, profile and capex
        daylight: Exterior illuminance at the config timestep
        occupancy_inputs: Profiles and holiday calendar
        config: Timestep, mode and seed

    Returns:
        EnergyResult with annual, per-zone and monthly energy in kWh

    Raises:
        ConfigError: if the daylight series does not match the config timestep
    """
    if daylight.timestep_minutes != config.timestep_minutes or len(daylight) != config.steps:
        raise ConfigError(
            f"daylight series has {len(daylight)} steps of {daylight.timestep_minutes} min, "
            f"expected {config.steps} steps of {config.timestep_minutes} min")

    features = scenario.features
    gates: Dict[ProfileId, np.ndarray] = {}
    total_power = np.zeros(config.steps)
    per_zone: Dict[str, float] = {}
    hours_per_step = config.timestep_minutes / 60.0

    for zone in house.zones:
        gate = None
        if features.occupancy_mode is not OccupancyMode.NONE:
            profile_id = zone.profile_override or scenario.profile
            if profile_id not in gates:
                profile = occupancy_inputs.profile(profile_id)
                gates[profile_id] = _occupancy_gate(scenario, profile, occupancy_inputs, config).values
            gate = gates[profile_id]

        interior = control.interior_daylight(daylight.exterior_illuminance, zone.daylight_factor)
        dims = control.dim_factors(features.daylight_mode, interior, zone.illuminance_setpoint,
                                   config.hysteresis)
        power = zone.installed_power * control.power_fractions(features, gate, dims)
        per_zone[zone.name] = float(power.sum() * hours_per_step / 1000.0)
        total_power += power

    return EnergyResult(
        annual_energy=math.fsum(per_zone.values()),
        per_zone_energy=per_zone,
        monthly_energy=_monthly(total_power, config.timestep_minutes),
        per_timestep_trace=total_power if config.keep_trace else None,
    )


class SweepResult(Mapping):
    """(location, scenario id) -> EnergyResult, plus the cells that failed."""

    def __init__(self, results: Dict[Tuple[str, str], EnergyResult], errors: List[CellError]):
        self._results = results
        self.errors = errors

    def __getitem__(self, key: Tuple[str, str]) -> EnergyResult:
        return self._results[key]

    def __iter__(self) -> Iterator[Tuple[str, str]]:
        return iter(self._results)

    def __len__(self) -> int:
        return len(self._results)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self):
        if self.errors:
            raise self.errors[0]


def _run_cell(site: Site, scenario: Scenario, occupancy_inputs: OccupancyInputs,
              config: SimulationConfig):
    key = (site.name, scenario.id)
    started = time.perf_counter()
    cell_config = replace(config, seed=derive_seed(config.seed, site.name, scenario.id))
    try:
        result = simulate_year(site.house, scenario, site.daylight, occupancy_inputs, cell_config)
    except Exception as e:
        return key, CellError(site.name, scenario.id, e)
    logger.debug("%s / %s: %.2f kWh in %.3f s", site.name, scenario.id, result.annual_energy,
                 time.perf_counter() - started)
    return key, result


def sweep(sites: Sequence[Site], scenarios: Sequence[Scenario], occupancy_inputs: OccupancyInputs,
          config: SimulationConfig, n_jobs: int = 1) -> SweepResult:
    """
    Evaluate every (site, scenario) cell.

    Results keep input order (sites outer, scenarios inner) whatever the
    completion order; a failing cell is reported in SweepResult.errors while the
    others still complete.
    """
    names = [site.name for site in sites]
    if len(set(names)) != len(names):
        raise ConfigError("location names must be unique", "locations")

    cells = [(site, scenario) for site in sites for scenario in scenarios]
    if not cells:
        return SweepResult({}, [])

    logger.info("sweeping %d cells with n_jobs=%d", len(cells), n_jobs)
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_run_cell)(site, scenario, occupancy_inputs, config) for site, scenario in cells
    )

    results: Dict[Tuple[str, str], EnergyResult] = {}
    errors: List[CellError] = []
    for key, outcome in outcomes:
        if isinstance(outcome, CellError):
            logger.warning("cell failed: %s", outcome)
            errors.append(outcome)
        else:
            results[key] = outcome
    return SweepResult(results, errors)
