"""
Weather ingestion for the lighting simulator.

Reads EnergyPlus Weather (EPW) files, or synthesizes a clear-sky year when no
file is available, and turns either into a per-timestep exterior illuminance
series for one location.
"""

import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from errors import ConfigError, DomainError, EpwFormatError, EpwLengthError, EpwParseError, WeatherError
from model import Location


logger = logging.getLogger(__name__)

HOURS_PER_YEAR = 8760
EPW_HEADER_LINES = 8
EPW_FIELD_COUNT = 35

# zero-based EPW column positions of the fields the simulator consumes
COL_MONTH = 1
COL_DAY = 2
COL_HOUR = 3
COL_GHI = 13
COL_DNI = 14
COL_DHI = 15
COL_GH_ILLUMINANCE = 16
CONSUMED_COLUMNS = [COL_MONTH, COL_DAY, COL_HOUR, COL_GHI, COL_DNI, COL_DHI, COL_GH_ILLUMINANCE]

MISSING_IRRADIANCE = 9999
MISSING_ILLUMINANCE = 999999

SUNSHINE_DNI_THRESHOLD = 120.0  # W/m2, WMO definition
DEFAULT_LUMINOUS_EFFICACY = 120.0  # lm/W
DEFAULT_E_MAX = 100_000.0  # lux


@dataclass(frozen=True)
class EpwHeader:
    """Site metadata from the LOCATION line plus the raw header block."""

    city: str
    state: str
    country: str
    source: str
    wmo_code: str
    latitude: float
    longitude: float
    utc_offset: float
    elevation: float
    lines: Tuple[str, ...] = ()


class EpwRecord(NamedTuple):
    """One hourly EPW row; None marks a missing-value sentinel."""

    month: int
    day: int
    hour: int
    global_horizontal_irradiance: Optional[float]
    direct_normal_irradiance: Optional[float]
    diffuse_horizontal_irradiance: Optional[float]
    global_horizontal_illuminance: Optional[float]


@dataclass(frozen=True)
class SolarPosition:
    elevation: float
    declination: float
    hour_angle: float


@dataclass(frozen=True, eq=False)
class DaylightSeries:
    """Exterior horizontal illuminance (lux) for one year at a fixed timestep."""

    timestep_minutes: int
    exterior_illuminance: np.ndarray

    def __post_init__(self):
        expected = HOURS_PER_YEAR * 60 // self.timestep_minutes
        values = np.array(self.exterior_illuminance, dtype=float)
        if len(values) != expected:
            raise ConfigError(
                f"daylight series has {len(values)} steps, expected {expected} "
                f"for a {self.timestep_minutes}-minute timestep")
        if np.any(values < 0):
            raise ConfigError("daylight series contains negative illuminance")
        values.setflags(write=False)
        object.__setattr__(self, "exterior_illuminance", values)

    def __len__(self) -> int:
        return len(self.exterior_illuminance)


def _parse_header(lines: List[str]) -> EpwHeader:
    if not lines or not lines[0].startswith("LOCATION"):
        raise EpwFormatError("file does not begin with a LOCATION header", 1)
    fields = lines[0].rstrip().split(",")
    if len(fields) < 10:
        raise EpwFormatError(f"LOCATION header has {len(fields)} fields, expected 10", 1)
    try:
        latitude, longitude, utc_offset, elevation = (float(v) for v in fields[6:10])
    except ValueError:
        raise EpwFormatError("LOCATION header latitude/longitude/timezone/elevation not numeric", 1)
    if not -90.0 <= latitude <= 90.0 or not -180.0 <= longitude <= 180.0:
        raise EpwFormatError("LOCATION header coordinates out of range", 1)
    if len(lines) < EPW_HEADER_LINES:
        raise EpwFormatError(
            f"header has {len(lines)} lines, expected {EPW_HEADER_LINES}", len(lines) + 1)
    return EpwHeader(
        city=fields[1].strip(),
        state=fields[2].strip(),
        country=fields[3].strip(),
        source=fields[4].strip(),
        wmo_code=fields[5].strip(),
        latitude=latitude,
        longitude=longitude,
        utc_offset=utc_offset,
        elevation=elevation,
        lines=tuple(line.rstrip("\r\n") for line in lines[:EPW_HEADER_LINES]),
    )


def _absent(values: np.ndarray, sentinel: int) -> List[Optional[float]]:
    return [None if v >= sentinel else float(v) for v in values]


def parse_epw(stream: IO) -> Tuple[EpwHeader, List[EpwRecord]]:
    """
    Parse an EPW file from a byte (or text) stream.

    Args:
        stream: File-like object positioned at the LOCATION line

    Returns:
        Tuple of (header, list of 8760 EpwRecord)

    Raises:
        EpwFormatError: malformed header or rows
        EpwLengthError: record count differs from 8760
        EpwParseError: non-numeric consumed field (row is the file line number,
            column the 1-based field position)
    """
    raw = stream.read()
    text = raw.decode("latin-1") if isinstance(raw, bytes) else raw
    lines = text.splitlines()
    header = _parse_header(lines)

    data_lines = lines[EPW_HEADER_LINES:]
    while data_lines and not data_lines[-1].strip():
        data_lines.pop()
    if len(data_lines) != HOURS_PER_YEAR:
        raise EpwLengthError(len(data_lines))

    for offset, line in enumerate(data_lines):
        count = line.count(",") + 1
        if count != EPW_FIELD_COUNT:
            raise EpwFormatError(f"expected {EPW_FIELD_COUNT} fields, found {count}", offset + EPW_HEADER_LINES + 1)

    frame = pd.read_csv(
        io.StringIO("\n".join(data_lines)),
        header=None,
        index_col=False,
        names=list(range(EPW_FIELD_COUNT)),
        usecols=CONSUMED_COLUMNS,
        dtype=str,
        keep_default_na=False,
    )

    numeric = {}
    for column in CONSUMED_COLUMNS:
        text_values = frame[column].str.strip()
        values = pd.to_numeric(text_values, errors="coerce")
        bad = values.isna().to_numpy()
        if bad.any():
            index = int(np.argmax(bad))
            raise EpwParseError(index + EPW_HEADER_LINES + 1, column + 1, text_values.iloc[index])
        numeric[column] = values.to_numpy(dtype=float)

    for column, low, high in ((COL_MONTH, 1, 12), (COL_DAY, 1, 31), (COL_HOUR, 1, 24)):
        out_of_range = (numeric[column] < low) | (numeric[column] > high)
        if out_of_range.any():
            index = int(np.argmax(out_of_range))
            raise EpwFormatError(
                f"field {column + 1} value {numeric[column][index]:g} outside [{low}, {high}]",
                index + EPW_HEADER_LINES + 1)
    for column in (COL_GHI, COL_DNI, COL_DHI, COL_GH_ILLUMINANCE):
        negative = numeric[column] < 0
        if negative.any():
            index = int(np.argmax(negative))
            raise EpwFormatError(f"field {column + 1} is negative", index + EPW_HEADER_LINES + 1)

    records = [
        EpwRecord(int(m), int(d), int(h), ghi, dni, dhi, ill)
        for m, d, h, ghi, dni, dhi, ill in zip(
            numeric[COL_MONTH], numeric[COL_DAY], numeric[COL_HOUR],
            _absent(numeric[COL_GHI], MISSING_IRRADIANCE),
            _absent(numeric[COL_DNI], MISSING_IRRADIANCE),
            _absent(numeric[COL_DHI], MISSING_IRRADIANCE),
            _absent(numeric[COL_GH_ILLUMINANCE], MISSING_ILLUMINANCE),
        )
    ]
    logger.debug("parsed EPW for %s: %d records", header.city, len(records))
    return header, records


def read_epw(path: Union[str, Path]) -> Tuple[EpwHeader, List[EpwRecord]]:
    """Read an EPW file from disk."""
    try:
        with open(path, "rb") as stream:
            return parse_epw(stream)
    except OSError as exc:
        raise WeatherError(f"cannot read weather file {path}: {exc.strerror or exc}") from exc


def _format_value(value: Optional[float], sentinel: int) -> str:
    if value is None:
        return str(sentinel)
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def write_epw(header: EpwHeader, records: Sequence[EpwRecord], stream: IO[str]):
    """
    Write records back out in EPW layout (debug writer).

    Only the consumed fields carry data; every other field gets its
    missing-value marker, so the output is for inspection and round-trip
    checks rather than for other simulation tools.
    """
    lines = list(header.lines)
    if not lines:
        lines = [
            f"LOCATION,{header.city},{header.state},{header.country},{header.source},"
            f"{header.wmo_code},{header.latitude!r},{header.longitude!r},{header.utc_offset!r},"
            f"{header.elevation!r}"
        ]
        lines += ["DESIGN CONDITIONS,0", "TYPICAL/EXTREME PERIODS,0", "GROUND TEMPERATURES,0",
                  "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0", "COMMENTS 1,", "COMMENTS 2,",
                  "DATA PERIODS,1,1,Data,Monday, 1/ 1,12/31"]
    for line in lines:
        stream.write(line + "\n")

    for record in records:
        fields = ["9999"] * EPW_FIELD_COUNT
        fields[0] = "1999"
        fields[4] = "60"
        fields[5] = "*"
        fields[COL_MONTH] = str(record.month)
        fields[COL_DAY] = str(record.day)
        fields[COL_HOUR] = str(record.hour)
        fields[COL_GHI] = _format_value(record.global_horizontal_irradiance, MISSING_IRRADIANCE)
        fields[COL_DNI] = _format_value(record.direct_normal_irradiance, MISSING_IRRADIANCE)
        fields[COL_DHI] = _format_value(record.diffuse_horizontal_irradiance, MISSING_IRRADIANCE)
        fields[COL_GH_ILLUMINANCE] = _format_value(record.global_horizontal_illuminance, MISSING_ILLUMINANCE)
        stream.write(",".join(fields) + "\n")


def declination(day_of_year) -> np.ndarray:
    """Solar declination in degrees (Cooper's formula)."""
    return 23.45 * np.sin(np.radians(360.0 * (284.0 + np.asarray(day_of_year, dtype=float)) / 365.0))


def _sin_elevation(latitude: float, decl, hour_angle):
    phi = math.radians(latitude)
    delta = np.radians(decl)
    h = np.radians(hour_angle)
    value = math.sin(phi) * np.sin(delta) + math.cos(phi) * np.cos(delta) * np.cos(h)
    return np.clip(value, -1.0, 1.0)


def solar_position(latitude: float, day_of_year: int, solar_hour: float) -> SolarPosition:
    """
    Sun position from latitude, day of year and local solar time.

    Args:
        latitude: Site latitude in degrees
        day_of_year: 1-365
        solar_hour: Local solar time in hours (12 = solar noon)

    Returns:
        SolarPosition with elevation, declination and hour angle in degrees
    """
    if not -90.0 <= latitude <= 90.0:
        raise DomainError(f"latitude {latitude} outside [-90, 90]")
    if not 1 <= day_of_year <= 365:
        raise DomainError(f"day_of_year {day_of_year} outside [1, 365]")
    decl = float(declination(day_of_year))
    hour_angle = 15.0 * (solar_hour - 12.0)
    elevation = math.degrees(math.asin(float(_sin_elevation(latitude, decl, hour_angle))))
    return SolarPosition(elevation=elevation, declination=decl, hour_angle=hour_angle)


def exterior_illuminance(source: Union[EpwRecord, SolarPosition],
                         luminous_efficacy: float = DEFAULT_LUMINOUS_EFFICACY,
                         e_max: float = DEFAULT_E_MAX,
                         clearness: float = 1.0) -> float:
    """
    Exterior horizontal illuminance in lux.

    EPW records use their illuminance field when present, otherwise global
    horizontal irradiance times luminous efficacy. A SolarPosition selects the
    clear-sky model: e_max * max(0, sin(elevation)) * clearness.
    """
    if not luminous_efficacy > 0:
        raise DomainError("luminous efficacy must be > 0")
    if isinstance(source, EpwRecord):
        if source.global_horizontal_illuminance is not None:
            return float(source.global_horizontal_illuminance)
        if source.global_horizontal_irradiance is None:
            return 0.0
        return source.global_horizontal_irradiance * luminous_efficacy
    if isinstance(source, SolarPosition):
        return e_max * max(0.0, math.sin(math.radians(source.elevation))) * clearness
    raise TypeError(f"unsupported illuminance source {type(source).__name__}")


def sunshine_hours(records: Sequence[EpwRecord]) -> float:
    """Hours with direct normal irradiance at or above 120 W/m2."""
    return float(sum(
        1 for r in records
        if r.direct_normal_irradiance is not None and r.direct_normal_irradiance >= SUNSHINE_DNI_THRESHOLD
    ))


def _steps_per_hour(timestep_minutes: int) -> int:
    if timestep_minutes <= 0 or 60 % timestep_minutes:
        raise ConfigError(f"timestep of {timestep_minutes} min does not divide one hour", "timestep")
    return 60 // timestep_minutes


def daylight_series_from_epw(records: Sequence[EpwRecord], timestep_minutes: int,
                             luminous_efficacy: float = DEFAULT_LUMINOUS_EFFICACY) -> DaylightSeries:
    """
    Hourly EPW illuminance held constant over each hour's sub-steps.

    EPW hour h covers clock interval [h-1, h).
    """
    if not luminous_efficacy > 0:
        raise DomainError("luminous efficacy must be > 0")
    frame = pd.DataFrame.from_records(records, columns=EpwRecord._fields)
    illuminance = frame["global_horizontal_illuminance"].astype(float)
    ghi = frame["global_horizontal_irradiance"].astype(float)
    hourly = illuminance.fillna(ghi * luminous_efficacy).fillna(0.0).to_numpy()
    values = np.repeat(hourly, _steps_per_hour(timestep_minutes))
    return DaylightSeries(timestep_minutes=timestep_minutes, exterior_illuminance=values)


def _step_sin_elevation(location: Location, timestep_minutes: int) -> np.ndarray:
    step_hours = timestep_minutes / 60.0
    steps = int(round(HOURS_PER_YEAR / step_hours))
    clock = (np.arange(steps) + 0.5) * step_hours
    day_of_year = np.floor(clock / 24.0) + 1.0
    solar_hour = clock % 24.0 + (location.longitude / 15.0 - location.utc_offset)
    return _sin_elevation(location.latitude, declination(day_of_year), 15.0 * (solar_hour - 12.0))


def daylight_hours(location: Location) -> float:
    """Hours per year with the sun above the horizon (hourly midpoints)."""
    return float(np.count_nonzero(_step_sin_elevation(location, 60) > 0))


def calibrate_clearness(location: Location, annual_sunshine_hours: Optional[float]) -> float:
    """
    Clear-sky clearness so that modeled sunshine hours match a target total.

    Modeled sunshine hours are daylight hours weighted by clearness.
    """
    if annual_sunshine_hours is None:
        return 1.0
    if annual_sunshine_hours < 0:
        raise DomainError("annual sunshine hours must be >= 0")
    clearness = min(1.0, annual_sunshine_hours / daylight_hours(location))
    logger.debug("clearness for %s calibrated to %.4f", location.name, clearness)
    return clearness


def clear_sky_sunshine_hours(location: Location, clearness: float) -> float:
    return clearness * daylight_hours(location)


def clear_sky_series(location: Location, timestep_minutes: int,
                     clearness: Optional[float] = None,
                     e_max: Optional[float] = None) -> DaylightSeries:
    """
    Synthesize a clear-sky illuminance year.

    Solar position is taken at each timestep midpoint, converting clock time to
    solar time through longitude and UTC offset.
    """
    _steps_per_hour(timestep_minutes)
    if clearness is None:
        clearness = calibrate_clearness(location, location.sunshine_hours)
    if e_max is None:
        e_max = location.e_max
    sin_el = _step_sin_elevation(location, timestep_minutes)
    values = e_max * np.clip(sin_el, 0.0, None) * clearness
    return DaylightSeries(timestep_minutes=timestep_minutes, exterior_illuminance=values)


def annual_illuminance_integral(series: DaylightSeries) -> float:
    """Annual exterior illuminance integral in lux-hours."""
    return float(series.exterior_illuminance.sum() * series.timestep_minutes / 60.0)
