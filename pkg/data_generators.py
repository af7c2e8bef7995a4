"""
Data generation functions for the lighting simulator.
Uses Faker to generate randomized houses, locations and cash-flow parameter sets
for property checks and sensitivity studies.
"""

from typing import List, Optional

from faker import Faker

from econ import CashflowParams
from model import CLEAR_SKY, HouseSpec, Location, ProfileId, Zone


DEFAULT_SEED = 42


def _faker(seed: int) -> Faker:
    fake = Faker()
    fake.seed_instance(seed)
    return fake


# Room types for a residential house, with a plausible daylight factor range
ROOM_TYPES = {
    "bedroom": (0.01, 0.04),
    "living_room": (0.02, 0.05),
    "kitchen": (0.01, 0.04),
    "dining_room": (0.02, 0.05),
    "bathroom": (0.005, 0.02),
    "toilet": (0.0, 0.01),
    "hall": (0.0, 0.01),
    "study": (0.02, 0.04),
    "laundry": (0.0, 0.015),
}

LAMP_POWERS = [5.0, 7.0, 9.0, 11.0, 15.0]
SETPOINTS = [150.0, 200.0, 300.0, 500.0]


def generate_location(seed: int = DEFAULT_SEED, tariff_id: str = "flat") -> Location:
    """Random clear-sky location with a sunshine total between 1200 and 3500 h."""
    fake = _faker(seed)
    latitude = fake.pyfloat(min_value=-60, max_value=60, right_digits=2)
    longitude = fake.pyfloat(min_value=-179, max_value=179, right_digits=2)
    return Location(
        name=fake.city(),
        latitude=latitude,
        longitude=longitude,
        utc_offset=float(round(longitude / 15.0)),
        tariff_id=tariff_id,
        weather_source=CLEAR_SKY,
        sunshine_hours=float(fake.random_int(1200, 3500)),
    )


def generate_zones(count: Optional[int] = None, seed: int = DEFAULT_SEED) -> List[Zone]:
    """
    Generate random house zones.

    Returns list of Zones with unique names like 'bedroom_2'.
    """
    fake = _faker(seed)
    if count is None:
        count = fake.random_int(1, 9)

    zones = []
    used = {}
    for _ in range(count):
        room = fake.random_element(list(ROOM_TYPES))
        used[room] = used.get(room, 0) + 1
        low, high = ROOM_TYPES[room]
        zones.append(Zone(
            name=f"{room}_{used[room]}",
            luminaire_count=fake.random_int(1, 3),
            luminaire_power=fake.random_element(LAMP_POWERS),
            daylight_factor=round(fake.random.uniform(low, high), 4),
            illuminance_setpoint=fake.random_element(SETPOINTS),
            profile_override=fake.random_element([None, None, None, ProfileId.PROFILE_1, ProfileId.PROFILE_2]),
        ))
    return zones


def generate_house(location: Optional[Location] = None, seed: int = DEFAULT_SEED) -> HouseSpec:
    if location is None:
        location = generate_location(seed)
    return HouseSpec(zones=tuple(generate_zones(seed=seed)), location=location)


def generate_cashflow_params(count: int = 1000, seed: int = DEFAULT_SEED) -> List[CashflowParams]:
    """
    Generate randomized cash-flow parameter sets.

    Investments run from EUR 50 to 1000, yearly inflows from EUR 20 to 300,
    horizons from 5 to 20 years and discount rates from 0% to 15%.
    """
    fake = _faker(seed)
    params = []
    for _ in range(count):
        params.append(CashflowParams(
            initial_investment=round(fake.random.uniform(50.0, 1000.0), 2),
            annual_inflow=round(fake.random.uniform(20.0, 300.0), 2),
            horizon_years=fake.random_int(5, 20),
            discount_rate=round(fake.random.uniform(0.0, 0.15), 4),
        ))
    return params
