"""
Study configuration loading.

Reads the JSON study document, validates it against schemas.py and builds the
immutable domain objects a run needs.
"""

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

import econ
import schemas
from engine import OccupancyInputs, SimulationConfig, SimulationMode
from errors import ConfigError
from model import CLEAR_SKY, DeviceCatalog, HouseSpec, Location, Scenario, Zone, build_scenario_grid


logger = logging.getLogger(__name__)

DEFAULT_CONFIG = Path(__file__).resolve().parent / "config" / "default.json"


@dataclass(frozen=True)
class StudyConfig:
    """Everything a simulate run needs, resolved from one config document."""

    path: Optional[Path]
    locations: Tuple[Location, ...]
    zones: Tuple[Zone, ...]
    catalog: DeviceCatalog
    tariffs: Dict[str, econ.Tariff]
    emission_factors: econ.EmissionFactors
    occupancy: OccupancyInputs
    simulation: SimulationConfig
    economics: econ.EconomicsSettings
    luminous_efficacy: float = 120.0

    @property
    def houses(self) -> List[HouseSpec]:
        return [HouseSpec(zones=self.zones, location=location) for location in self.locations]

    def scenarios(self) -> List[Scenario]:
        return build_scenario_grid(self.houses[0], self.catalog)

    def tariff_for(self, location: Location) -> econ.Tariff:
        return self.tariffs[location.tariff_id]

    def with_weather(self, overrides: Mapping[str, str]) -> "StudyConfig":
        """Replace weather sources by location name (from --weather NAME=EPW)."""
        names = {location.name for location in self.locations}
        unknown = sorted(set(overrides) - names)
        if unknown:
            raise ConfigError(f"no location named {', '.join(unknown)}", "--weather")
        locations = tuple(
            replace(location, weather_source=str(overrides.get(location.name, location.weather_source)))
            for location in self.locations
        )
        return replace(self, locations=locations)

    def with_simulation(self, **changes) -> "StudyConfig":
        changes = {key: value for key, value in changes.items() if value is not None}
        return replace(self, simulation=replace(self.simulation, **changes))


def _resolve_weather(source: str, base_dir: Optional[Path]) -> str:
    if source == CLEAR_SKY or base_dir is None:
        return source
    path = Path(source)
    return str(path if path.is_absolute() else (base_dir / path).resolve())


def build_study(document: Union[dict, list], path: Optional[Path] = None) -> StudyConfig:
    """
    Validate a decoded document and build the StudyConfig.

    Raises:
        ConfigError: with the first violation's pointer and message
    """
    study, violations = schemas.parse_study(document)
    if violations:
        first = violations[0]
        raise ConfigError(first.message, first.pointer)

    base_dir = path.resolve().parent if path else None
    locations = tuple(
        Location(
            name=loc.name,
            latitude=loc.latitude,
            longitude=loc.longitude,
            utc_offset=loc.utc_offset,
            tariff_id=loc.tariff,
            weather_source=_resolve_weather(loc.weather, base_dir),
            sunshine_hours=loc.sunshine_hours,
            e_max=loc.e_max,
        )
        for loc in study.locations
    )
    zones = tuple(
        Zone(
            name=z.name,
            luminaire_count=z.luminaire_count,
            luminaire_power=z.luminaire_power,
            daylight_factor=z.daylight_factor,
            illuminance_setpoint=z.illuminance_setpoint,
            profile_override=z.profile,
        )
        for z in study.zones
    )

    profiles = dict(OccupancyInputs().profiles)
    for profile_id, schema in study.profiles.items():
        profiles[profile_id] = schemas.build_profile(profile_id, schema)

    sim = study.simulation
    return StudyConfig(
        path=path,
        locations=locations,
        zones=zones,
        catalog=DeviceCatalog(**study.catalog.model_dump()),
        tariffs={name: schemas.build_tariff(name, t) for name, t in study.tariffs.items()},
        emission_factors=econ.EmissionFactors(**study.emission_factors.model_dump()),
        occupancy=OccupancyInputs(profiles=profiles, calendar=schemas.build_calendar(study.holidays)),
        simulation=SimulationConfig(
            timestep_minutes=sim.timestep_minutes,
            mode=SimulationMode(sim.mode),
            seed=sim.seed,
            hold_time_minutes=sim.hold_time_minutes,
            start_weekday=sim.start_weekday,
            hysteresis=sim.hysteresis,
        ),
        economics=econ.EconomicsSettings(**study.economics.model_dump()),
        luminous_efficacy=sim.luminous_efficacy,
    )


def read_document(path: Union[str, Path]):
    """Decode a JSON config file; unreadable or malformed files raise ConfigError."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")


def load_config(path: Union[str, Path] = DEFAULT_CONFIG) -> StudyConfig:
    path = Path(path)
    study = build_study(read_document(path), path)
    logger.info("loaded study config %s: %d locations, %d zones", path, len(study.locations), len(study.zones))
    return study
