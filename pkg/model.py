"""
Domain model for the smart-lighting simulator.

Holds the building description (locations, zones, house), the control-feature
bundles, the device-cost catalog, and the builder that expands
features x occupancy profiles into the 15-scenario study grid.
"""

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from errors import ConfigError


class DaylightMode(str, enum.Enum):
    NONE = "none"
    HARVEST = "harvest"
    HARVEST_DIM = "harvest_dim"


class OccupancyMode(str, enum.Enum):
    NONE = "none"
    SCHEDULE = "schedule"
    MOTION_DETECTION = "motion_detection"


class ProfileId(str, enum.Enum):
    PROFILE_1 = "profile1"
    PROFILE_2 = "profile2"


CLEAR_SKY = "clear-sky"


@dataclass(frozen=True)
class Location:
    """A study site; weather_source is an EPW path or CLEAR_SKY."""

    name: str
    latitude: float
    longitude: float
    utc_offset: float
    tariff_id: str
    weather_source: str = CLEAR_SKY
    sunshine_hours: Optional[float] = None
    e_max: float = 100_000.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ConfigError(f"latitude {self.latitude} outside [-90, 90]", "latitude")
        if not -180.0 <= self.longitude <= 180.0:
            raise ConfigError(f"longitude {self.longitude} outside [-180, 180]", "longitude")


@dataclass(frozen=True)
class Zone:
    """One room of the house and its lighting."""

    name: str
    luminaire_count: int = 1
    luminaire_power: float = 11.0
    daylight_factor: float = 0.02
    illuminance_setpoint: float = 300.0
    profile_override: Optional[ProfileId] = None

    def __post_init__(self):
        if self.luminaire_count < 0:
            raise ConfigError(f"zone {self.name}: luminaire_count must be >= 0", "luminaire_count")
        if not self.luminaire_power > 0:
            raise ConfigError(f"zone {self.name}: luminaire_power must be > 0", "luminaire_power")
        if not 0.0 <= self.daylight_factor <= 1.0:
            raise ConfigError(f"zone {self.name}: daylight_factor must be in [0, 1]", "daylight_factor")
        if not self.illuminance_setpoint > 0:
            raise ConfigError(f"zone {self.name}: illuminance_setpoint must be > 0", "illuminance_setpoint")

    @property
    def installed_power(self) -> float:
        """Total lamp power of the zone in watts."""
        return self.luminaire_count * self.luminaire_power


@dataclass(frozen=True)
class HouseSpec:
    zones: Tuple[Zone, ...]
    location: Location

    def __post_init__(self):
        object.__setattr__(self, "zones", tuple(self.zones))
        if not self.zones:
            raise ConfigError("house must have at least one zone", "zones")
        names = [zone.name for zone in self.zones]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ConfigError(f"duplicate zone names: {', '.join(duplicates)}", "zones")

    @property
    def luminaire_count(self) -> int:
        return sum(zone.luminaire_count for zone in self.zones)


@dataclass(frozen=True)
class ControlFeatures:
    daylight_mode: DaylightMode = DaylightMode.NONE
    occupancy_mode: OccupancyMode = OccupancyMode.NONE

    @property
    def is_baseline(self) -> bool:
        return self.daylight_mode is DaylightMode.NONE and self.occupancy_mode is OccupancyMode.NONE


@dataclass(frozen=True)
class DeviceCatalog:
    """Unit prices in euros."""

    bulb_price: float = 19.99
    motion_sensor_price: float = 21.29
    light_motion_sensor_price: float = 24.90
    hub_price: float = 84.14

    def __post_init__(self):
        for name in ("bulb_price", "motion_sensor_price", "light_motion_sensor_price", "hub_price"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0", name)


DEFAULT_CATALOG = DeviceCatalog()

# Published bundle totals; the catalog arithmetic gives
# 373.10 and 398.37 for the last two.
PUBLISHED_CAPEX = {
    "baseline": 0.0,
    "schedule": 139.93,
    "motion_detection": 374.07,
    "daylight": 399.35,
}


@dataclass(frozen=True)
class Scenario:
    id: str
    features: ControlFeatures
    profile: Optional[ProfileId]
    capex: float
    bulb_cost: float = 0.0

    def __post_init__(self):
        has_occupancy = self.features.occupancy_mode is not OccupancyMode.NONE
        if has_occupancy != (self.profile is not None):
            raise ConfigError(f"scenario {self.id}: profile must be set iff occupancy mode is not none")
        if self.capex < 0:
            raise ConfigError(f"scenario {self.id}: capex must be >= 0")

    @property
    def capex_net_of_bulbs(self) -> float:
        """Investment in sensors and hub only."""
        return self.capex - self.bulb_cost


DEFAULT_ROOMS = [
    # (name, daylight factor)
    ("bedroom_1", 0.02),
    ("bedroom_2", 0.02),
    ("living_room", 0.02),
    ("kitchen_diner", 0.02),
    ("bathroom", 0.02),
    ("toilet", 0.01),
    ("hall", 0.01),
]


def default_house(location: Location) -> HouseSpec:
    """Two-floor family house with seven rooms, one 11 W lamp each."""
    zones = [Zone(name=name, daylight_factor=df) for name, df in DEFAULT_ROOMS]
    return HouseSpec(zones=tuple(zones), location=location)


_OCCUPANCY_LABELS = {
    OccupancyMode.SCHEDULE: "Sched",
    OccupancyMode.MOTION_DETECTION: "MD",
}

_PROFILE_LABELS = {
    ProfileId.PROFILE_1: "1st",
    ProfileId.PROFILE_2: "2nd",
}

_DAYLIGHT_SUFFIX = {
    DaylightMode.NONE: "",
    DaylightMode.HARVEST: "+DH",
    DaylightMode.HARVEST_DIM: "+DH+Dim",
}


def scenario_id(features: ControlFeatures, profile: Optional[ProfileId]) -> str:
    """
    Build the figure label for a scenario, e.g. 'Baseline', 'DH+Dim', 'MD 2nd+DH'.
    """
    if features.occupancy_mode is OccupancyMode.NONE:
        if features.daylight_mode is DaylightMode.NONE:
            return "Baseline"
        return _DAYLIGHT_SUFFIX[features.daylight_mode].lstrip("+")
    prefix = f"{_OCCUPANCY_LABELS[features.occupancy_mode]} {_PROFILE_LABELS[profile]}"
    return prefix + _DAYLIGHT_SUFFIX[features.daylight_mode]


def normalize_scenario_id(label: str) -> str:
    """Case- and spacing-insensitive key so 'MD 2nd +DH+Dim' matches 'MD 2nd+DH+Dim'."""
    return " ".join(label.replace("+", " + ").split()).replace(" + ", "+").lower()


def scenario_capex(features: ControlFeatures, zone_count: int, catalog: DeviceCatalog,
                   luminaire_count: Optional[int] = None) -> float:
    """
    Calculate the device bill of materials for a feature bundle.

    Args:
        features: Control features of the scenario
        zone_count: Number of rooms (one sensor per room)
        catalog: Device prices
        luminaire_count: Number of bulbs to replace (defaults to one per room)

    Returns:
        Investment in euros
    """
    if zone_count < 1:
        raise ConfigError("zone_count must be >= 1")
    if features.is_baseline:
        return 0.0
    if luminaire_count is None:
        luminaire_count = zone_count

    total = luminaire_count * catalog.bulb_price
    if features.daylight_mode is not DaylightMode.NONE:
        # combined light/motion sensor replaces the plain motion sensor
        total += zone_count * catalog.light_motion_sensor_price + catalog.hub_price
    elif features.occupancy_mode is OccupancyMode.MOTION_DETECTION:
        total += zone_count * catalog.motion_sensor_price + catalog.hub_price
    return total


def build_scenario_grid(house: HouseSpec, catalog: DeviceCatalog) -> List[Scenario]:
    """
    Expand daylight modes x occupancy modes x profiles into the 15 study scenarios.

    Order: the three profile-less scenarios, then Sched and MD for Profile 1,
    then Sched and MD for Profile 2, each with no DH, DH, DH+Dim.
    """
    zone_count = len(house.zones)
    luminaires = house.luminaire_count
    combos: List[Tuple[ControlFeatures, Optional[ProfileId]]] = []

    for daylight in DaylightMode:
        combos.append((ControlFeatures(daylight, OccupancyMode.NONE), None))
    for profile in ProfileId:
        for occupancy in (OccupancyMode.SCHEDULE, OccupancyMode.MOTION_DETECTION):
            for daylight in DaylightMode:
                combos.append((ControlFeatures(daylight, occupancy), profile))

    scenarios = []
    for features, profile in combos:
        capex = scenario_capex(features, zone_count, catalog, luminaire_count=luminaires)
        bulbs = 0.0 if features.is_baseline else luminaires * catalog.bulb_price
        scenarios.append(Scenario(
            id=scenario_id(features, profile),
            features=features,
            profile=profile,
            capex=capex,
            bulb_cost=bulbs,
        ))
    return scenarios


def select_scenarios(scenarios: Sequence[Scenario], labels: Sequence[str]) -> List[Scenario]:
    """
    Filter scenarios by label, keeping grid order.

    Raises:
        ConfigError: if a label matches no scenario
    """
    wanted = {normalize_scenario_id(label): label for label in labels}
    known = {normalize_scenario_id(s.id) for s in scenarios}
    unknown = [label for key, label in wanted.items() if key not in known]
    if unknown:
        raise ConfigError(f"unknown scenario id(s): {', '.join(unknown)}", "--scenarios")
    return [s for s in scenarios if normalize_scenario_id(s.id) in wanted]


def find_scenario(scenarios: Sequence[Scenario], label: str) -> Scenario:
    return select_scenarios(scenarios, [label])[0]
