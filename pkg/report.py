"""
Report emission - turns sweep energies into metric rows and writes them out.

Rows are written as CSV (header row, LF line endings), a JSON mirror with the
same rounded values, and a Markdown summary for quick review. Undefined
metrics (payback that never happens, IRR of a free scenario) are empty cells
in CSV and null in JSON.
"""

import json
import logging
import numbers
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence

import pandas as pd

import econ
from config import StudyConfig
from engine import Site, SweepResult, load_site, sweep
from model import Scenario, find_scenario, select_scenarios


logger = logging.getLogger(__name__)

# column -> decimals used at serialization
RESULT_COLUMNS: Dict[str, Optional[int]] = {
    "location": None,
    "scenario": None,
    "energy_kWh": 2,
    "cost_eur": 2,
    "capex_eur": 2,
    "inflow_eur": 2,
    "payback_yr": 2,
    "npv_eur": 2,
    "irr_pct": 4,
    "adi_eur": 2,
    "co2_kg": 2,
    "no2_g": 2,
    "so2_g": 2,
    "co_g": 2,
    "ch4_g": 2,
}


@dataclass
class StudyResults:
    sites: List[Site]
    scenarios: List[Scenario]
    reference: Scenario
    energies: SweepResult
    reports: List[econ.MetricsReport]


def collect_metrics(sites: Sequence[Site], scenarios: Sequence[Scenario], reference: Scenario,
                    energies: SweepResult, tariffs: Mapping[str, econ.Tariff],
                    factors: econ.EmissionFactors,
                    settings: econ.EconomicsSettings) -> List[econ.MetricsReport]:
    """
    Price every cell against its location's reference scenario.

    Args:
        sites: Evaluated sites
        scenarios: Scenarios to report, in output order
        reference: Scenario whose cost defines the yearly inflow
        energies: Sweep result covering scenarios and reference
        tariffs: Tariff per location name
        factors: Emission factors
        settings: Horizon, discount rate

    Returns:
        One MetricsReport per (site, scenario), sites outer
    """
    reports = []
    for site in sites:
        tariff = tariffs[site.name]
        ref = energies[(site.name, reference.id)]
        reference_cost = econ.energy_cost(ref.annual_energy, tariff, ref.monthly_energy)
        for scenario in scenarios:
            result = energies[(site.name, scenario.id)]
            reports.append(econ.evaluate_metrics(
                location=site.name,
                scenario_id=scenario.id,
                annual_energy=result.annual_energy,
                capex=scenario.capex,
                tariff=tariff,
                reference_cost=reference_cost,
                factors=factors,
                settings=settings,
                energy_by_month=result.monthly_energy,
            ))
    return reports


def evaluate_study(study: StudyConfig, labels: Optional[Sequence[str]] = None,
                   n_jobs: int = 1) -> StudyResults:
    """Load weather, sweep the grid and compute metrics for the selected scenarios."""
    grid = study.scenarios()
    selected = select_scenarios(grid, labels) if labels else grid
    reference = find_scenario(grid, study.economics.reference_scenario)
    to_run = selected if reference in selected else [*selected, reference]

    sites = [load_site(house, study.simulation.timestep_minutes, study.luminous_efficacy)
             for house in study.houses]
    energies = sweep(sites, to_run, study.occupancy, study.simulation, n_jobs=n_jobs)
    energies.raise_for_errors()

    tariffs = {site.name: study.tariff_for(site.house.location) for site in sites}
    reports = collect_metrics(sites, selected, reference, energies, tariffs,
                              study.emission_factors, study.economics)
    return StudyResults(sites=sites, scenarios=list(selected), reference=reference,
                        energies=energies, reports=reports)


def metrics_frame(reports: Sequence[econ.MetricsReport]) -> pd.DataFrame:
    """Unrounded result rows; undefined metrics are None."""
    rows = []
    for r in reports:
        rows.append({
            "location": r.location,
            "scenario": r.scenario_id,
            "energy_kWh": r.annual_energy,
            "cost_eur": r.annual_cost,
            "capex_eur": r.capex,
            "inflow_eur": r.annual_inflow,
            "payback_yr": r.payback,
            "npv_eur": r.npv,
            "irr_pct": None if r.irr is None else r.irr * 100.0,
            "adi_eur": r.adi,
            "co2_kg": r.emissions.co2_kg,
            "no2_g": r.emissions.no2_g,
            "so2_g": r.emissions.so2_g,
            "co_g": r.emissions.co_g,
            "ch4_g": r.emissions.ch4_g,
        })
    return pd.DataFrame(rows, columns=list(RESULT_COLUMNS)).astype(object)


def _decimals(column: str, decimals: Optional[Mapping[str, int]]) -> Optional[int]:
    if decimals and column in decimals:
        return decimals[column]
    return RESULT_COLUMNS.get(column, 2)


def _cell(value, places: Optional[int]) -> str:
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return ""
    if places is None or isinstance(value, str):
        return str(value)
    return f"{value:.{places}f}"


def format_frame(frame: pd.DataFrame, decimals: Optional[Mapping[str, int]] = None) -> pd.DataFrame:
    """String-formatted copy; rounding happens here and nowhere else."""
    formatted = frame.copy()
    for column in formatted.columns:
        places = _decimals(column, decimals)
        formatted[column] = [_cell(v, places) for v in frame[column]]
    return formatted


def write_csv(frame: pd.DataFrame, path: Path, decimals: Optional[Mapping[str, int]] = None):
    format_frame(frame, decimals).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")


def frame_records(frame: pd.DataFrame, decimals: Optional[Mapping[str, int]] = None) -> List[dict]:
    """JSON-ready records, each number rounded exactly as in the CSV."""
    formatted = format_frame(frame, decimals)
    records = []
    for (_, raw), (_, row) in zip(frame.iterrows(), formatted.iterrows()):
        record = {}
        for column, text in row.items():
            numeric = isinstance(raw[column], numbers.Real) and not isinstance(raw[column], bool)
            if text == "":
                record[column] = None
            elif numeric and _decimals(column, decimals) is not None:
                record[column] = float(text)
            else:
                record[column] = raw[column] if isinstance(raw[column], bool) else text
        records.append(record)
    return records


def write_json(frame: pd.DataFrame, path: Path, decimals: Optional[Mapping[str, int]] = None):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(frame_records(frame, decimals), f, indent=2, allow_nan=False)
        f.write("\n")


def format_table_as_markdown(frame: pd.DataFrame, title: str,
                             decimals: Optional[Mapping[str, int]] = None) -> str:
    """Format a result table as markdown."""
    output = [f"## Table: `{title}`", f"\n**Row Count:** {len(frame)}\n"]

    if frame.empty:
        output.append("*No rows*\n")
        return "\n".join(output)

    formatted = format_frame(frame, decimals)
    output.append("| " + " | ".join(formatted.columns) + " |")
    output.append("| " + " | ".join(["---"] * len(formatted.columns)) + " |")
    for _, row in formatted.iterrows():
        output.append("| " + " | ".join(v if v != "" else "*n/a*" for v in row) + " |")

    output.append("")
    return "\n".join(output)


def write_summary(tables: Mapping[str, pd.DataFrame], path: Path, heading: str):
    output = [f"# {heading}", f"\n**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n", "---\n"]
    for title, frame in tables.items():
        output.append(format_table_as_markdown(frame, title))
        output.append("---\n")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(output))


def write_results(reports: Sequence[econ.MetricsReport], out_dir: Path) -> pd.DataFrame:
    """Write results.csv, results.json and summary.md; returns the unrounded frame."""
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = metrics_frame(reports)
    write_csv(frame, out_dir / "results.csv")
    write_json(frame, out_dir / "results.json")
    write_summary({"results": frame}, out_dir / "summary.md", "Lighting Scenario Results")
    logger.info("wrote %d result rows to %s", len(frame), out_dir)
    return frame
