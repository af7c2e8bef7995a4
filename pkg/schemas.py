"""
Schema definitions for the study configuration document.

A study is one JSON document; the pydantic models below describe its shape
and field ranges. validate_config() reports every problem as a Violation with
a JSON-pointer location, so the CLI can list them all at once.
"""

import datetime
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

import occupancy
from econ import BillingWindow, Tariff, TariffKind
from engine import SimulationMode
from errors import ConfigError
from model import (CLEAR_SKY, ControlFeatures, DaylightMode, OccupancyMode, ProfileId,
                   normalize_scenario_id, scenario_id)


class Violation(NamedTuple):
    pointer: str
    message: str

    def __str__(self) -> str:
        return f"{self.pointer}: {self.message}"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# Schema definitions
class LocationSchema(_Strict):
    name: str = Field(min_length=1)
    latitude: float = Field(ge=-90, le=90)
    longitude: float = Field(ge=-180, le=180)
    utc_offset: float = Field(ge=-12, le=14)
    tariff: str
    weather: str = CLEAR_SKY
    sunshine_hours: Optional[float] = Field(None, ge=0)
    e_max: float = Field(100_000.0, gt=0)


class ZoneSchema(_Strict):
    name: str = Field(min_length=1)
    luminaire_count: int = Field(1, ge=0)
    luminaire_power: float = Field(11.0, gt=0)
    daylight_factor: float = Field(0.02, ge=0, le=1)
    illuminance_setpoint: float = Field(300.0, gt=0)
    profile: Optional[ProfileId] = None


class CatalogSchema(_Strict):
    bulb_price: float = Field(19.99, ge=0)
    motion_sensor_price: float = Field(21.29, ge=0)
    light_motion_sensor_price: float = Field(24.90, ge=0)
    hub_price: float = Field(84.14, ge=0)


class TariffSchema(_Strict):
    kind: TariffKind
    flat_rate: float = Field(0.0, ge=0)
    tiers: List[Tuple[Optional[float], float]] = Field(default_factory=list)
    window: BillingWindow = BillingWindow.ANNUAL
    base_load_kwh: float = Field(0.0, ge=0)


class EmissionFactorsSchema(_Strict):
    co2: float = Field(0.516, ge=0)
    no2: float = Field(0.44, ge=0)
    so2: float = Field(0.290, ge=0)
    co: float = Field(0.230, ge=0)
    ch4: float = Field(0.184, ge=0)


class ProfileSchema(_Strict):
    weekday: List[Tuple[str, str, float]]
    weekend: List[Tuple[str, str, float]]
    schedule_weekday: List[Tuple[str, str]]
    schedule_weekend: List[Tuple[str, str]]


class HolidaySchema(_Strict):
    winter_start: str = Field("01-01", pattern=r"^\d{2}-\d{2}$")
    summer_start: str = Field("08-01", pattern=r"^\d{2}-\d{2}$")
    length_days: int = Field(15, ge=0, le=180)


class SimulationSchema(_Strict):
    timestep_minutes: int = Field(10, gt=0)
    mode: SimulationMode = SimulationMode.EXPECTED
    seed: int = Field(0, ge=0)
    hold_time_minutes: int = Field(occupancy.DEFAULT_HOLD_MINUTES, ge=0)
    start_weekday: int = Field(0, ge=0, le=6)
    hysteresis: float = Field(0.0, ge=0)
    luminous_efficacy: float = Field(120.0, gt=0)


class EconomicsSchema(_Strict):
    horizon_years: int = Field(10, ge=1)
    discount_rate: float = Field(0.05, gt=-1)
    reference_scenario: str = "Baseline"


class StudySchema(_Strict):
    locations: List[LocationSchema] = Field(min_length=1)
    zones: List[ZoneSchema] = Field(min_length=1)
    catalog: CatalogSchema = Field(default_factory=CatalogSchema)
    tariffs: Dict[str, TariffSchema] = Field(min_length=1)
    emission_factors: EmissionFactorsSchema = Field(default_factory=EmissionFactorsSchema)
    profiles: Dict[ProfileId, ProfileSchema] = Field(default_factory=dict)
    holidays: HolidaySchema = Field(default_factory=HolidaySchema)
    simulation: SimulationSchema = Field(default_factory=SimulationSchema)
    economics: EconomicsSchema = Field(default_factory=EconomicsSchema)


def to_pointer(loc: Tuple[Any, ...]) -> str:
    """JSON pointer (RFC 6901) for a pydantic error location."""
    if not loc:
        return "/"
    parts = (str(p.value if isinstance(p, ProfileId) else p) for p in loc)
    return "".join("/" + p.replace("~", "~0").replace("/", "~1") for p in parts)


def parse_month_day(text: str) -> datetime.date:
    month, day = (int(part) for part in text.split("-"))
    try:
        return datetime.date(occupancy.REFERENCE_YEAR, month, day)
    except ValueError:
        raise ConfigError(f"{text!r} is not a valid MM-DD date")


def build_tariff(name: str, schema: TariffSchema) -> Tariff:
    return Tariff(
        name=name,
        kind=schema.kind,
        flat_rate=schema.flat_rate,
        tiers=tuple(schema.tiers),
        window=schema.window,
        base_load_kwh=schema.base_load_kwh,
    )


def build_profile(profile_id: ProfileId, schema: ProfileSchema) -> occupancy.Profile:
    def intervals(rows):
        return tuple((occupancy.parse_clock(a), occupancy.parse_clock(b)) for a, b in rows)

    return occupancy.Profile(
        id=profile_id,
        weekday=occupancy.DailyPattern.from_clock(schema.weekday),
        weekend=occupancy.DailyPattern.from_clock(schema.weekend),
        schedule_weekday=intervals(schema.schedule_weekday),
        schedule_weekend=intervals(schema.schedule_weekend),
    )


def build_calendar(schema: HolidaySchema) -> occupancy.HolidayCalendar:
    return occupancy.HolidayCalendar(
        winter_start=parse_month_day(schema.winter_start),
        summer_start=parse_month_day(schema.summer_start),
        length_days=schema.length_days,
    )


def known_scenario_ids() -> List[str]:
    labels = []
    for daylight in DaylightMode:
        labels.append(scenario_id(ControlFeatures(daylight, OccupancyMode.NONE), None))
        for occ in (OccupancyMode.SCHEDULE, OccupancyMode.MOTION_DETECTION):
            for profile in ProfileId:
                labels.append(scenario_id(ControlFeatures(daylight, occ), profile))
    return labels


def _collect(violations: List[Violation], pointer: str, build, *args):
    try:
        build(*args)
    except ConfigError as e:
        violations.append(Violation(pointer, str(e)))


def _cross_check(study: StudySchema) -> List[Violation]:
    violations: List[Violation] = []

    for i, location in enumerate(study.locations):
        if location.tariff not in study.tariffs:
            violations.append(Violation(f"/locations/{i}/tariff", f"unknown tariff {location.tariff!r}"))
    seen = set()
    for i, location in enumerate(study.locations):
        if location.name in seen:
            violations.append(Violation(f"/locations/{i}/name", f"duplicate location {location.name!r}"))
        seen.add(location.name)

    seen = set()
    for i, zone in enumerate(study.zones):
        if zone.name in seen:
            violations.append(Violation(f"/zones/{i}/name", f"duplicate zone {zone.name!r}"))
        seen.add(zone.name)

    for name, tariff in study.tariffs.items():
        _collect(violations, to_pointer(("tariffs", name, "tiers")), build_tariff, name, tariff)

    for profile_id, profile in study.profiles.items():
        _collect(violations, to_pointer(("profiles", profile_id)), build_profile, profile_id, profile)

    _collect(violations, "/holidays", build_calendar, study.holidays)

    sim = study.simulation
    _collect(violations, "/simulation/timestep_minutes", occupancy.check_timestep, sim.timestep_minutes)
    if sim.mode is SimulationMode.STOCHASTIC and sim.hold_time_minutes < sim.timestep_minutes:
        violations.append(Violation("/simulation/hold_time_minutes", "hold time must be at least one timestep"))

    reference = normalize_scenario_id(study.economics.reference_scenario)
    if reference not in {normalize_scenario_id(label) for label in known_scenario_ids()}:
        violations.append(Violation(
            "/economics/reference_scenario",
            f"unknown scenario {study.economics.reference_scenario!r}"))
    return violations


def parse_study(document: Any) -> Tuple[Optional[StudySchema], List[Violation]]:
    try:
        study = StudySchema.model_validate(document)
    except ValidationError as e:
        return None, [Violation(to_pointer(err["loc"]), err["msg"]) for err in e.errors()]
    return study, _cross_check(study)


def validate_config(document: Any) -> List[Violation]:
    """
    Check a parsed configuration document.

    Args:
        document: Decoded JSON document

    Returns:
        List of violations, empty when the document is valid
    """
    _, violations = parse_study(document)
    return violations
