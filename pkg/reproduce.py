"""
Reference study reproduction.

Runs the bundled two-city study, writes one table per reported figure
(energy, cost, payback, NPV, IRR, emissions, additional disposable income)
and grades the acceptance checks, each with its computed and target value.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

import econ
from config import DEFAULT_CONFIG, StudyConfig, load_config
from data_generators import generate_cashflow_params
from model import CLEAR_SKY, PUBLISHED_CAPEX, DaylightMode, OccupancyMode, ProfileId, Scenario, find_scenario
from report import StudyResults, evaluate_study, metrics_frame, write_csv, write_json, write_summary
from weather import calibrate_clearness, clear_sky_sunshine_hours, read_epw, sunshine_hours


logger = logging.getLogger(__name__)

# figure table -> (result column, decimals)
FIGURES: Dict[str, Tuple[str, int]] = {
    "fig2_energy": ("energy_kWh", 2),
    "fig3_cost": ("cost_eur", 2),
    "fig4_payback": ("payback_yr", 2),
    "fig5_npv": ("npv_eur", 2),
    "fig6_irr": ("irr_pct", 4),
    "fig8_adi": ("adi_eur", 2),
}
EMISSION_COLUMNS = ["co2_kg", "no2_g", "so2_g", "co_g", "ch4_g"]

SUNSHINE_TOLERANCE = 0.15
DH_SAVING_RANGE = (5.0, 30.0)
MD2_CO2_CAP = 0.30
TARIFF_GAP = 5.0
CAPEX_TOLERANCE = 2.0
FINANCE_SETS = 1000


@dataclass
class Check:
    criterion: int
    name: str
    location: str
    computed: float
    target: str
    passed: bool


@dataclass
class ReproductionOutcome:
    study: StudyConfig
    results: StudyResults
    checks: List[Check]
    files: List[Path]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _energy(results: StudyResults, location: str, label: str) -> float:
    return results.energies[(location, label)].annual_energy


def _label(daylight: DaylightMode, occupancy: OccupancyMode, profile: Optional[ProfileId],
           scenarios: Sequence[Scenario]) -> str:
    for scenario in scenarios:
        f = scenario.features
        if f.daylight_mode is daylight and f.occupancy_mode is occupancy and scenario.profile is profile:
            return scenario.id
    raise KeyError((daylight, occupancy, profile))


def check_scheduling(results: StudyResults) -> List[Check]:
    checks = []
    p1 = _label(DaylightMode.NONE, OccupancyMode.SCHEDULE, ProfileId.PROFILE_1, results.scenarios)
    p2 = _label(DaylightMode.NONE, OccupancyMode.SCHEDULE, ProfileId.PROFILE_2, results.scenarios)
    for site in results.sites:
        baseline = _energy(results, site.name, results.reference.id)
        ratio = _energy(results, site.name, p1) / baseline
        checks.append(Check(1, "Profile 1 scheduling saving (%)", site.name, (1.0 - ratio) * 100.0,
                            "33.3333 (ratio 2/3, rel 1e-9)", math.isclose(ratio, 2.0 / 3.0, rel_tol=1e-9)))
        saving = (1.0 - _energy(results, site.name, p2) / baseline) * 100.0
        expected = (1.0 - 62.0 / 168.0) * 100.0
        checks.append(Check(2, "Profile 2 scheduling saving (%)", site.name, saving,
                            f"{expected:.2f} +/- 0.5", abs(saving - expected) <= 0.5))
    return checks


def check_motion_detection(results: StudyResults) -> List[Check]:
    checks = []
    for site in results.sites:
        worst = -math.inf
        for profile in ProfileId:
            for daylight in DaylightMode:
                md = _energy(results, site.name, _label(daylight, OccupancyMode.MOTION_DETECTION, profile,
                                                        results.scenarios))
                sched = _energy(results, site.name, _label(daylight, OccupancyMode.SCHEDULE, profile,
                                                           results.scenarios))
                worst = max(worst, md - sched)
        checks.append(Check(3, "max E(MD) - E(Sched) (kWh)", site.name, worst, "<= 0", worst <= 1e-9))

        md1 = _label(DaylightMode.NONE, OccupancyMode.MOTION_DETECTION, ProfileId.PROFILE_1, results.scenarios)
        saving = (1.0 - _energy(results, site.name, md1) / _energy(results, site.name, results.reference.id)) * 100
        expected = (1.0 - 5066.875 / 8760.0) * 100.0
        checks.append(Check(3, "Profile 1 MD saving (%)", site.name, saving,
                            f"{expected:.2f} +/- 0.01", abs(saving - expected) <= 0.01))
    return checks


def check_daylight(results: StudyResults) -> List[Check]:
    checks = []
    dh = _label(DaylightMode.HARVEST, OccupancyMode.NONE, None, results.scenarios)
    dim = _label(DaylightMode.HARVEST_DIM, OccupancyMode.NONE, None, results.scenarios)
    dh_energy = {}
    for site in results.sites:
        base = _energy(results, site.name, results.reference.id)
        e_dh = _energy(results, site.name, dh)
        e_dim = _energy(results, site.name, dim)
        dh_energy[site.name] = e_dh
        checks.append(Check(4, "E(DH+Dim) <= E(DH) <= E(Baseline)", site.name, e_dh, "ordered",
                            e_dim <= e_dh <= base))
        saving = (1.0 - e_dh / base) * 100.0
        low, high = DH_SAVING_RANGE
        checks.append(Check(4, "DH saving (%)", site.name, saving, f"[{low:.0f}, {high:.0f}]",
                            low <= saving <= high))
    if "Algiers" in dh_energy and "Stuttgart" in dh_energy:
        gap = dh_energy["Algiers"] - dh_energy["Stuttgart"]
        checks.append(Check(4, "E(DH) Algiers - Stuttgart (kWh)", "both", gap, "< 0", gap < 0))
    return checks


def location_sunshine_hours(study: StudyConfig) -> Dict[str, float]:
    hours = {}
    for location in study.locations:
        if location.weather_source == CLEAR_SKY:
            clearness = calibrate_clearness(location, location.sunshine_hours)
            hours[location.name] = clear_sky_sunshine_hours(location, clearness)
        else:
            _, records = read_epw(location.weather_source)
            hours[location.name] = sunshine_hours(records)
    return hours


def check_sunshine(study: StudyConfig) -> List[Check]:
    checks = []
    hours = location_sunshine_hours(study)
    for location in study.locations:
        target = location.sunshine_hours
        if target is None:
            continue
        ok = abs(hours[location.name] - target) <= SUNSHINE_TOLERANCE * target
        checks.append(Check(5, "sunshine hours (h)", location.name, hours[location.name],
                            f"{target:.0f} +/- 15%", ok))
    if "Algiers" in hours and "Stuttgart" in hours:
        gap = hours["Algiers"] - hours["Stuttgart"]
        checks.append(Check(5, "sunshine Algiers - Stuttgart (h)", "both", gap, "> 0", gap > 0))
    return checks


def check_tariffs(results: StudyResults, study: StudyConfig) -> List[Check]:
    german = study.tariffs.get("germany", econ.GERMAN_TARIFF)
    algerian = study.tariffs.get("algeria", econ.ALGERIAN_TARIFF)
    spot = econ.energy_cost(1000.0, german)
    checks = [Check(6, "1000 kWh German cost (EUR)", "-", spot, "304.80", math.isclose(spot, 304.80, abs_tol=1e-9))]

    worst = math.inf
    for result in results.energies.values():
        cost_de = econ.energy_cost(result.annual_energy, german, result.monthly_energy)
        cost_dz = econ.energy_cost(result.annual_energy, algerian, result.monthly_energy)
        if cost_dz > 0:
            worst = min(worst, cost_de / cost_dz)
    checks.append(Check(6, "min German/Algerian cost ratio", "all", worst, f"> {TARIFF_GAP:.0f}",
                        worst > TARIFF_GAP))
    return checks


def check_emissions(results: StudyResults, study: StudyConfig) -> List[Check]:
    factors = econ.GERMAN_EMISSION_FACTORS
    e = econ.emissions(1000.0, factors)
    expected = (516.0, 440.0, 290.0, 230.0, 184.0)
    got = (e.co2_kg, e.no2_g, e.so2_g, e.co_g, e.ch4_g)
    exact = all(math.isclose(a, b, rel_tol=1e-12) for a, b in zip(got, expected))
    checks = [Check(7, "1000 kWh CO2 (kg)", "-", e.co2_kg, "516 / 440 / 290 / 230 / 184", exact)]

    md2 = _label(DaylightMode.NONE, OccupancyMode.MOTION_DETECTION, ProfileId.PROFILE_2, results.scenarios)
    for site in results.sites:
        co2_md = econ.emissions(_energy(results, site.name, md2), study.emission_factors).co2_kg
        co2_base = econ.emissions(_energy(results, site.name, results.reference.id),
                                  study.emission_factors).co2_kg
        ratio = co2_md / co2_base
        checks.append(Check(7, "MD 2nd CO2 / Baseline CO2", site.name, ratio, f"<= {MD2_CO2_CAP:.2f}",
                            ratio <= MD2_CO2_CAP))
    return checks


def check_finance(seed: int) -> List[Check]:
    worst_root = worst_adi = worst_payback = 0.0
    for params in generate_cashflow_params(FINANCE_SETS, seed=seed):
        rate = econ.irr(params)
        if rate is not None:
            at_root = econ.CashflowParams(params.initial_investment, params.annual_inflow,
                                          params.horizon_years, rate)
            worst_root = max(worst_root, abs(econ.npv(at_root)))
        identity = econ.adi(params) - econ.npv(params) - params.initial_investment
        worst_adi = max(worst_adi, abs(identity) / max(1.0, params.initial_investment))
        years = econ.payback(params.initial_investment, params.annual_inflow)
        worst_payback = max(worst_payback, abs(years * params.annual_inflow - params.initial_investment))

    break_even = econ.npv(econ.CashflowParams(1000.0, 100.0, 10, 0.0))
    return [
        Check(8, "max |NPV(IRR)| (EUR)", "-", worst_root, "< 1e-6", worst_root < 1e-6),
        Check(8, "max |ADI - NPV - initial| (rel)", "-", worst_adi, "<= 1e-9", worst_adi <= 1e-9),
        Check(8, "max |payback x inflow - initial| (EUR)", "-", worst_payback, "<= 1e-9", worst_payback <= 1e-9),
        Check(8, "NPV at r = 0 break-even (EUR)", "-", break_even, "0", abs(break_even) <= 1e-9),
    ]


def check_capex(results: StudyResults) -> List[Check]:
    def capex_of(daylight, occupancy_mode):
        return find_scenario(results.scenarios, _label(daylight, occupancy_mode,
                                                       None if occupancy_mode is OccupancyMode.NONE
                                                       else ProfileId.PROFILE_1,
                                                       results.scenarios)).capex

    sched = capex_of(DaylightMode.NONE, OccupancyMode.SCHEDULE)
    md = capex_of(DaylightMode.NONE, OccupancyMode.MOTION_DETECTION)
    dh = capex_of(DaylightMode.HARVEST, OccupancyMode.NONE)
    return [
        Check(9, "Sched capex (EUR)", "-", sched, f"{PUBLISHED_CAPEX['schedule']:.2f}",
              math.isclose(sched, PUBLISHED_CAPEX["schedule"], abs_tol=1e-9)),
        Check(9, "MD capex (EUR)", "-", md, f"{PUBLISHED_CAPEX['motion_detection']:.2f} +/- 2",
              abs(md - PUBLISHED_CAPEX["motion_detection"]) <= CAPEX_TOLERANCE),
        Check(9, "daylight capex (EUR)", "-", dh, f"{PUBLISHED_CAPEX['daylight']:.2f} +/- 2",
              abs(dh - PUBLISHED_CAPEX["daylight"]) <= CAPEX_TOLERANCE),
    ]


def figure_tables(frame: pd.DataFrame, scenarios: Sequence[Scenario]) -> Dict[str, pd.DataFrame]:
    """One row per scenario, one column (group) per city."""
    order = [s.id for s in scenarios]
    tables = {}
    for name, (column, _) in FIGURES.items():
        table = frame.pivot(index="scenario", columns="location", values=column).reindex(order)
        table.columns.name = None
        tables[name] = table.reset_index()

    parts = []
    for gas in EMISSION_COLUMNS:
        part = frame.pivot(index="scenario", columns="location", values=gas).reindex(order)
        part.columns = [f"{city}_{gas}" for city in part.columns]
        parts.append(part)
    emissions = pd.concat(parts, axis=1)
    cities = list(dict.fromkeys(frame["location"]))
    emissions = emissions[[f"{city}_{gas}" for city in cities for gas in EMISSION_COLUMNS]]
    tables["fig7_emissions"] = emissions.reset_index()
    return dict(sorted(tables.items()))


def _cost_row(results: StudyResults, site_name: str, scenario: Scenario, tariff: econ.Tariff):
    result = results.energies[(site_name, scenario.id)]
    ref = results.energies[(site_name, results.reference.id)]
    cost = econ.energy_cost(result.annual_energy, tariff, result.monthly_energy)
    inflow = econ.annual_inflow(cost, econ.energy_cost(ref.annual_energy, tariff, ref.monthly_energy))
    return cost, inflow, econ.payback(scenario.capex, inflow)


def tariff_window_table(results: StudyResults, study: StudyConfig) -> pd.DataFrame:
    """Tiered-tariff locations priced with quarterly and annual billing windows."""
    rows = []
    for site in results.sites:
        tariff = study.tariff_for(site.house.location)
        if tariff.kind is not econ.TariffKind.TIERED:
            continue
        for scenario in results.scenarios:
            row = {"location": site.name, "scenario": scenario.id}
            for window in (econ.BillingWindow.QUARTERLY, econ.BillingWindow.ANNUAL):
                cost, inflow, years = _cost_row(results, site.name, scenario, tariff.with_window(window))
                row[f"cost_{window.value}_eur"] = cost
                row[f"inflow_{window.value}_eur"] = inflow
                row[f"payback_{window.value}_yr"] = years
            rows.append(row)
    return pd.DataFrame(rows).astype(object)


def payback_interpretation_table(results: StudyResults) -> pd.DataFrame:
    """Payback on full capex and on capex net of bulbs (sensors and hub only)."""
    rows = []
    for report in results.reports:
        scenario = find_scenario(results.scenarios, report.scenario_id)
        if scenario.features.is_baseline:
            continue
        rows.append({
            "location": report.location,
            "scenario": report.scenario_id,
            "inflow_eur": report.annual_inflow,
            "capex_eur": scenario.capex,
            "capex_net_of_bulbs_eur": scenario.capex_net_of_bulbs,
            "payback_yr": econ.payback(scenario.capex, report.annual_inflow),
            "payback_net_of_bulbs_yr": econ.payback(scenario.capex_net_of_bulbs, report.annual_inflow),
        })
    return pd.DataFrame(rows).astype(object)


def checks_frame(checks: Sequence[Check]) -> pd.DataFrame:
    return pd.DataFrame([{
        "criterion": c.criterion,
        "check": c.name,
        "location": c.location,
        "computed": c.computed,
        "target": c.target,
        "status": "pass" if c.passed else "fail",
    } for c in checks]).astype(object)


def run_checks(results: StudyResults, study: StudyConfig) -> List[Check]:
    steps: List[Callable[[], List[Check]]] = [
        lambda: check_scheduling(results),
        lambda: check_motion_detection(results),
        lambda: check_daylight(results),
        lambda: check_sunshine(study),
        lambda: check_tariffs(results, study),
        lambda: check_emissions(results, study),
        lambda: check_finance(study.simulation.seed),
        lambda: check_capex(results),
    ]
    checks = []
    for step in steps:
        checks.extend(step())
    return checks


def reproduce(out_dir: Path, config_path: Path = DEFAULT_CONFIG, n_jobs: int = 1) -> ReproductionOutcome:
    """
    Run the reference study and write every table plus checks.csv.

    Args:
        out_dir: Output directory (created if missing)
        config_path: Study config, the bundled two-city study by default
        n_jobs: Parallel sweep workers

    Returns:
        ReproductionOutcome with the graded checks and written files
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    study = load_config(config_path)
    results = evaluate_study(study, n_jobs=n_jobs)
    frame = metrics_frame(results.reports)

    files = []
    tables = figure_tables(frame, results.scenarios)
    for name, table in tables.items():
        decimals = {col: FIGURES[name][1] for col in table.columns if col != "scenario"} if name in FIGURES else None
        write_csv(table, out_dir / f"{name}.csv", decimals)
        files.append(out_dir / f"{name}.csv")

    extra = {
        "tariff_windows": tariff_window_table(results, study),
        "payback_interpretations": payback_interpretation_table(results),
    }
    for name, table in extra.items():
        write_csv(table, out_dir / f"{name}.csv")
        files.append(out_dir / f"{name}.csv")

    checks = run_checks(results, study)
    check_table = checks_frame(checks)
    write_csv(check_table, out_dir / "checks.csv", {"criterion": 0, "computed": 6})
    files.append(out_dir / "checks.csv")

    write_csv(frame, out_dir / "results.csv")
    write_json(frame, out_dir / "results.json")
    write_summary({"results": frame, **extra}, out_dir / "summary.md", "Reference Study Reproduction")
    files += [out_dir / "results.csv", out_dir / "results.json", out_dir / "summary.md"]

    failed = [c for c in checks if not c.passed]
    logger.info("reproduction: %d checks, %d failed", len(checks), len(failed))
    return ReproductionOutcome(study=study, results=results, checks=checks, files=files)
