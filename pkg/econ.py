"""
Techno-economic metrics: tariffs, payback, NPV, IRR, additional disposable
income and emission accounting.
"""

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from errors import ConfigError, DomainError


logger = logging.getLogger(__name__)

IRR_BRACKET = (-0.99, 10.0)
IRR_XTOL = 1e-13


class TariffKind(str, enum.Enum):
    FLAT = "flat"
    TIERED = "tiered"


class BillingWindow(str, enum.Enum):
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"
    ANNUAL = "annual"

    @property
    def months(self) -> int:
        return {"monthly": 1, "quarterly": 3, "annual": 12}[self.value]


class Tier(NamedTuple):
    threshold: Optional[float]  # kWh per window, None for the unbounded last tier
    rate: float  # EUR/kWh


@dataclass(frozen=True)
class Tariff:
    name: str
    kind: TariffKind = TariffKind.FLAT
    flat_rate: float = 0.0
    tiers: Tuple[Tier, ...] = ()
    window: BillingWindow = BillingWindow.ANNUAL
    base_load_kwh: float = 0.0  # per year, positions the lighting load within tiers

    def __post_init__(self):
        object.__setattr__(self, "kind", TariffKind(self.kind))
        object.__setattr__(self, "window", BillingWindow(self.window))
        object.__setattr__(self, "tiers", tuple(Tier(*t) for t in self.tiers))
        if self.flat_rate < 0:
            raise ConfigError(f"tariff {self.name}: flat_rate must be >= 0")
        if self.base_load_kwh < 0:
            raise ConfigError(f"tariff {self.name}: base_load_kwh must be >= 0")
        if self.kind is TariffKind.TIERED:
            self._check_tiers()

    def _check_tiers(self):
        if not self.tiers:
            raise ConfigError(f"tariff {self.name}: tiered tariff needs at least one tier")
        if self.tiers[-1].threshold is not None:
            raise ConfigError(f"tariff {self.name}: last tier must be unbounded")
        previous = 0.0
        for tier in self.tiers:
            if tier.rate < 0:
                raise ConfigError(f"tariff {self.name}: tier rates must be >= 0")
            if tier.threshold is None:
                continue
            if tier.threshold <= previous:
                raise ConfigError(f"tariff {self.name}: tier thresholds must be strictly increasing")
            previous = tier.threshold
        if any(t.threshold is None for t in self.tiers[:-1]):
            raise ConfigError(f"tariff {self.name}: only the last tier may be unbounded")

    def with_window(self, window: BillingWindow) -> "Tariff":
        return replace(self, window=window)


@dataclass(frozen=True)
class CashflowParams:
    initial_investment: float
    annual_inflow: float
    horizon_years: int = 10
    discount_rate: float = 0.05

    def __post_init__(self):
        if self.horizon_years < 1:
            raise DomainError("horizon_years must be >= 1")
        if not self.discount_rate > -1.0:
            raise DomainError("discount_rate must be > -1")
        if self.initial_investment < 0:
            raise DomainError("initial_investment must be >= 0")


@dataclass(frozen=True)
class EmissionFactors:
    co2: float  # kg/kWh
    no2: float  # g/kWh
    so2: float
    co: float
    ch4: float

    def __post_init__(self):
        for gas in ("co2", "no2", "so2", "co", "ch4"):
            if getattr(self, gas) < 0:
                raise ConfigError(f"emission factor {gas} must be >= 0", gas)


@dataclass(frozen=True)
class Emissions:
    co2_kg: float
    no2_g: float
    so2_g: float
    co_g: float
    ch4_g: float


@dataclass(frozen=True)
class EconomicsSettings:
    horizon_years: int = 10
    discount_rate: float = 0.05
    reference_scenario: str = "Baseline"

    def __post_init__(self):
        if self.horizon_years < 1:
            raise ConfigError("horizon_years must be >= 1", "horizon_years")
        if not self.discount_rate > -1.0:
            raise ConfigError("discount_rate must be > -1", "discount_rate")


@dataclass(frozen=True)
class MetricsReport:
    """Metrics of one (location, scenario) cell; None marks an undefined metric."""

    location: str
    scenario_id: str
    annual_energy: float
    annual_cost: float
    capex: float
    annual_inflow: float
    payback: Optional[float]
    npv: float
    irr: Optional[float]
    adi: float
    emissions: Emissions


GERMAN_TARIFF = Tariff(name="germany", kind=TariffKind.FLAT, flat_rate=0.3048)
ALGERIAN_TARIFF = Tariff(
    name="algeria",
    kind=TariffKind.TIERED,
    tiers=(Tier(125.0, 0.014), Tier(None, 0.033)),
    window=BillingWindow.QUARTERLY,
)
# German grid mix
GERMAN_EMISSION_FACTORS = EmissionFactors(co2=0.516, no2=0.44, so2=0.290, co=0.230, ch4=0.184)


def _tier_charge(energy: float, tiers: Sequence[Tier]) -> float:
    total = 0.0
    lower = 0.0
    for tier in tiers:
        upper = math.inf if tier.threshold is None else tier.threshold
        total += min(max(energy - lower, 0.0), upper - lower) * tier.rate
        lower = upper
    return total


def window_energy(annual_energy: float, window: BillingWindow,
                  energy_by_month: Optional[Sequence[float]] = None) -> np.ndarray:
    """Split annual energy into billing windows, uniformly by month when no breakdown is given."""
    if energy_by_month is None:
        monthly = np.full(12, annual_energy / 12.0)
    else:
        monthly = np.asarray(energy_by_month, dtype=float)
        if monthly.shape != (12,):
            raise DomainError("monthly energy breakdown must have 12 values")
        if np.any(monthly < 0):
            raise DomainError("monthly energy must be >= 0")
        if not math.isclose(monthly.sum(), annual_energy, rel_tol=1e-9, abs_tol=1e-9):
            raise DomainError(f"monthly breakdown sums to {monthly.sum():.6f} kWh, not {annual_energy:.6f}")
    return monthly.reshape(-1, window.months).sum(axis=1)


def energy_cost(annual_energy: float, tariff: Tariff,
                energy_by_month: Optional[Sequence[float]] = None) -> float:
    """
    Cost in euros of one year of lighting energy.

    Args:
        annual_energy: kWh per year
        tariff: Flat or tiered tariff
        energy_by_month: Optional 12-month breakdown for tiered billing windows

    Returns:
        Annual cost in euros (the lighting increment over any base load)

    Raises:
        DomainError: if energy is negative
    """
    if annual_energy < 0:
        raise DomainError(f"annual energy must be >= 0, got {annual_energy}")
    if tariff.kind is TariffKind.FLAT:
        return annual_energy * tariff.flat_rate

    windows = window_energy(annual_energy, tariff.window, energy_by_month)
    base = tariff.base_load_kwh / len(windows)
    return float(sum(_tier_charge(base + e, tariff.tiers) - _tier_charge(base, tariff.tiers)
                     for e in windows))


def payback(initial: float, annual_inflow: float) -> Optional[float]:
    """
    Payback period in years; None when the investment never pays back.

    A free scenario pays back immediately.
    """
    if initial < 0:
        raise DomainError("initial investment must be >= 0")
    if initial == 0:
        return 0.0
    if annual_inflow <= 0:
        return None
    return initial / annual_inflow


def _discounted_inflows(inflow: float, rate: float, years: int) -> float:
    k = np.arange(1, years + 1)
    return float(np.sum(inflow / (1.0 + rate) ** k))


def adi(params: CashflowParams) -> float:
    """Additional disposable income: inflows discounted over years 1..n."""
    return _discounted_inflows(params.annual_inflow, params.discount_rate, params.horizon_years)


def npv(params: CashflowParams) -> float:
    return adi(params) - params.initial_investment


def irr(params: CashflowParams) -> Optional[float]:
    """
    Internal rate of return by bisection on (-0.99, 10].

    Returns None for free scenarios and when NPV does not change sign over
    the bracket.
    """
    if params.initial_investment <= 0:
        return None

    def f(rate: float) -> float:
        return _discounted_inflows(params.annual_inflow, rate, params.horizon_years) - params.initial_investment

    lo, hi = IRR_BRACKET
    f_lo, f_hi = f(lo), f(hi)
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        return None
    return float(optimize.bisect(f, lo, hi, xtol=IRR_XTOL, maxiter=400))


def emissions(annual_energy: float, factors: EmissionFactors) -> Emissions:
    if annual_energy < 0:
        raise DomainError(f"annual energy must be >= 0, got {annual_energy}")
    return Emissions(
        co2_kg=annual_energy * factors.co2,
        no2_g=annual_energy * factors.no2,
        so2_g=annual_energy * factors.so2,
        co_g=annual_energy * factors.co,
        ch4_g=annual_energy * factors.ch4,
    )


def annual_inflow(scenario_cost: float, reference_cost: float) -> float:
    """Yearly saving against the reference scenario; may be <= 0."""
    if scenario_cost < 0 or reference_cost < 0:
        raise DomainError("costs must be >= 0")
    return reference_cost - scenario_cost


def evaluate_metrics(location: str, scenario_id: str, annual_energy: float, capex: float,
                     tariff: Tariff, reference_cost: float, factors: EmissionFactors,
                     settings: EconomicsSettings = EconomicsSettings(),
                     energy_by_month: Optional[Sequence[float]] = None) -> MetricsReport:
    """Assemble every metric of one cell given the reference scenario's annual cost."""
    cost = energy_cost(annual_energy, tariff, energy_by_month)
    inflow = annual_inflow(cost, reference_cost)
    params = CashflowParams(
        initial_investment=capex,
        annual_inflow=inflow,
        horizon_years=settings.horizon_years,
        discount_rate=settings.discount_rate,
    )
    report = MetricsReport(
        location=location,
        scenario_id=scenario_id,
        annual_energy=annual_energy,
        annual_cost=cost,
        capex=capex,
        annual_inflow=inflow,
        payback=payback(capex, inflow),
        npv=npv(params),
        irr=irr(params),
        adi=adi(params),
        emissions=emissions(annual_energy, factors),
    )
    logger.debug("%s / %s: cost %.4f, inflow %.4f", location, scenario_id, cost, inflow)
    return report
