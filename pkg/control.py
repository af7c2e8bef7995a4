"""
Lighting control rules.

Turns a scenario's control features into the fraction of full lamp power
drawn at each timestep: the occupancy gate times the daylight dimming factor.
Scalar functions evaluate one timestep; the plural forms work on whole-year
numpy arrays for the engine.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from errors import DomainError
from model import ControlFeatures, DaylightMode, OccupancyMode


@dataclass(frozen=True)
class ControlInputs:
    occupancy: float
    interior_daylight: float
    setpoint: float

    def __post_init__(self):
        if not 0.0 <= self.occupancy <= 1.0:
            raise DomainError(f"occupancy {self.occupancy} outside [0, 1]")
        if self.interior_daylight < 0 or self.setpoint < 0:
            raise DomainError("daylight and setpoint must be >= 0")


@dataclass(frozen=True)
class PowerFraction:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"power fraction {self.value} outside [0, 1]")

    def __float__(self) -> float:
        return self.value


def interior_daylight(exterior, daylight_factor: float):
    """Interior illuminance by the daylight-factor method (works on arrays too)."""
    if not 0.0 <= daylight_factor <= 1.0:
        raise DomainError(f"daylight factor {daylight_factor} outside [0, 1]")
    if np.any(np.asarray(exterior) < 0):
        raise DomainError("exterior illuminance must be >= 0")
    return exterior * daylight_factor


def _check_setpoint(setpoint: float):
    if not setpoint > 0:
        raise DomainError(f"illuminance setpoint must be > 0, got {setpoint}")


def dim_factor(mode: DaylightMode, interior_daylight: float, setpoint: float) -> PowerFraction:
    """
    Lamp power fraction left after daylight harvesting.

    Harvest switches the lamp off once daylight meets the setpoint; HarvestDim
    tops up only the missing part, 1 - daylight/setpoint.
    """
    _check_setpoint(setpoint)
    if mode is DaylightMode.NONE:
        return PowerFraction(1.0)
    if mode is DaylightMode.HARVEST:
        return PowerFraction(0.0 if interior_daylight >= setpoint else 1.0)
    return PowerFraction(min(1.0, max(0.0, 1.0 - interior_daylight / setpoint)))


def _switch_with_hysteresis(daylight: np.ndarray, setpoint: float, hysteresis: float) -> np.ndarray:
    # inside the band the lamp keeps its previous state; it starts on
    state = np.where(daylight >= setpoint + hysteresis, 0.0,
                     np.where(daylight < setpoint, 1.0, np.nan))
    return pd.Series(state).ffill().fillna(1.0).to_numpy()


def dim_factors(mode: DaylightMode, interior_daylight: np.ndarray, setpoint: float,
                hysteresis: float = 0.0) -> np.ndarray:
    """
    Vectorized dim_factor over a time series.

    Args:
        mode: Daylight mode of the scenario
        interior_daylight: Interior illuminance per timestep (lux)
        setpoint: Zone illuminance setpoint (lux)
        hysteresis: On/off band above the setpoint in lux (Harvest mode only)

    Returns:
        Power fractions in [0, 1], same shape as interior_daylight
    """
    _check_setpoint(setpoint)
    if hysteresis < 0:
        raise DomainError("hysteresis must be >= 0")
    daylight = np.asarray(interior_daylight, dtype=float)
    if mode is DaylightMode.NONE:
        return np.ones_like(daylight)
    if mode is DaylightMode.HARVEST:
        if hysteresis > 0:
            return _switch_with_hysteresis(daylight, setpoint, hysteresis)
        return np.where(daylight >= setpoint, 0.0, 1.0)
    return np.clip(1.0 - daylight / setpoint, 0.0, 1.0)


def power_fraction(features: ControlFeatures, occupancy_gate: float, dim: PowerFraction) -> PowerFraction:
    """Occupancy gate times dimming; the gate is 1 without occupancy control."""
    if not 0.0 <= occupancy_gate <= 1.0:
        raise DomainError(f"occupancy gate {occupancy_gate} outside [0, 1]")
    if features.occupancy_mode is OccupancyMode.NONE:
        occupancy_gate = 1.0
    return PowerFraction(occupancy_gate * float(dim))


def power_fractions(features: ControlFeatures, occupancy_gate: np.ndarray, dims: np.ndarray) -> np.ndarray:
    if features.occupancy_mode is OccupancyMode.NONE:
        return np.asarray(dims, dtype=float)
    return np.asarray(occupancy_gate, dtype=float) * dims
