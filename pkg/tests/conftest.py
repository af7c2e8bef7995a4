import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Path setup: make the top-level modules importable
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from engine import SimulationConfig  # noqa: E402
from model import Location, default_house  # noqa: E402
from weather import HOURS_PER_YEAR, DaylightSeries, daylight_series_from_epw, read_epw  # noqa: E402


REPO_ROOT = Path(__file__).resolve().parent.parent
WEATHER_DIR = REPO_ROOT / "data" / "weather"
ALGIERS_EPW = WEATHER_DIR / "DZA_Algiers_synthetic.epw"
STUTTGART_EPW = WEATHER_DIR / "DEU_Stuttgart_synthetic.epw"
DEFAULT_CONFIG = REPO_ROOT / "config" / "default.json"


@pytest.fixture(scope="session")
def algiers():
    return Location("Algiers", 36.72, 3.25, 1.0, "algeria", str(ALGIERS_EPW), sunshine_hours=2847)


@pytest.fixture(scope="session")
def stuttgart():
    return Location("Stuttgart", 48.83, 9.20, 1.0, "germany", str(STUTTGART_EPW), sunshine_hours=1662)


@pytest.fixture(scope="session")
def algiers_records():
    return read_epw(ALGIERS_EPW)[1]


@pytest.fixture(scope="session")
def stuttgart_records():
    return read_epw(STUTTGART_EPW)[1]


@pytest.fixture(scope="session")
def algiers_daylight(algiers_records):
    return daylight_series_from_epw(algiers_records, 10)


@pytest.fixture(scope="session")
def stuttgart_daylight(stuttgart_records):
    return daylight_series_from_epw(stuttgart_records, 10)


@pytest.fixture
def dark_year():
    """No daylight at all, 10-minute steps."""
    return DaylightSeries(10, np.zeros(HOURS_PER_YEAR * 6))


@pytest.fixture
def house(algiers):
    return default_house(algiers)


@pytest.fixture
def sim_config():
    return SimulationConfig()
