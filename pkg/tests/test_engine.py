import numpy as np
import pytest

from engine import (OccupancyInputs, SimulationConfig, SimulationMode, Site, derive_seed, simulate_year,
                    sweep)
from errors import CellError, ConfigError, DomainError
from model import DEFAULT_CATALOG, HouseSpec, Location, ProfileId, Zone, build_scenario_grid, default_house, find_scenario
from weather import clear_sky_series


OCCUPANCY = OccupancyInputs()


@pytest.fixture
def grid(house):
    return build_scenario_grid(house, DEFAULT_CATALOG)


def _energy(house, grid, label, daylight, config=None):
    scenario = find_scenario(grid, label)
    return simulate_year(house, scenario, daylight, OCCUPANCY, config or SimulationConfig())


# ---------------------------------------------------------------------------
# Closed forms without daylight
# ---------------------------------------------------------------------------
def test_baseline_energy(house, grid, dark_year):
    result = _energy(house, grid, "Baseline", dark_year)
    assert result.annual_energy == pytest.approx(77 * 8760 / 1000, rel=1e-9)
    assert result.annual_energy == pytest.approx(674.52, rel=1e-9)


def test_profile_1_schedule_is_two_thirds_of_baseline(house, grid, dark_year):
    result = _energy(house, grid, "Sched 1st", dark_year)
    assert result.annual_energy == pytest.approx(449.68, rel=1e-9)


def test_profile_1_motion_detection(house, grid, dark_year):
    result = _energy(house, grid, "MD 1st", dark_year)
    assert result.annual_energy == pytest.approx(77 * 5066.875 / 1000, rel=1e-9)
    assert result.annual_energy == pytest.approx(390.17, abs=0.05)


def test_profile_2_motion_detection_under_thirty_percent(house, grid, dark_year):
    baseline = _energy(house, grid, "Baseline", dark_year).annual_energy
    md2 = _energy(house, grid, "MD 2nd", dark_year).annual_energy
    assert md2 == pytest.approx(77 * 2617.125 / 1000, rel=1e-9)
    assert md2 / baseline <= 0.30


def test_daylight_control_does_nothing_in_the_dark(house, grid, dark_year):
    baseline = _energy(house, grid, "Baseline", dark_year).annual_energy
    assert _energy(house, grid, "DH+Dim", dark_year).annual_energy == pytest.approx(baseline)


def test_zone_and_month_totals_add_up(house, grid, dark_year):
    result = _energy(house, grid, "MD 2nd", dark_year)
    assert sum(result.per_zone_energy.values()) == pytest.approx(result.annual_energy, rel=1e-12)
    assert len(result.monthly_energy) == 12
    assert sum(result.monthly_energy) == pytest.approx(result.annual_energy, rel=1e-9)


def test_january_baseline(house, grid, dark_year):
    result = _energy(house, grid, "Baseline", dark_year)
    assert result.monthly_energy[0] == pytest.approx(57.288, rel=1e-9)


def test_trace_kept_on_request(house, grid, dark_year):
    result = _energy(house, grid, "Baseline", dark_year, SimulationConfig(keep_trace=True))
    assert result.per_timestep_trace.shape == (8760 * 6,)
    assert np.all(result.per_timestep_trace == 77.0)
    assert _energy(house, grid, "Baseline", dark_year).per_timestep_trace is None


def test_power_scales_energy(algiers, dark_year):
    single = HouseSpec(zones=(Zone("a", luminaire_power=11.0),), location=algiers)
    double = HouseSpec(zones=(Zone("a", luminaire_power=22.0),), location=algiers)
    scenario = find_scenario(build_scenario_grid(single, DEFAULT_CATALOG), "MD 1st")
    e1 = simulate_year(single, scenario, dark_year, OCCUPANCY, SimulationConfig()).annual_energy
    e2 = simulate_year(double, scenario, dark_year, OCCUPANCY, SimulationConfig()).annual_energy
    assert e2 == pytest.approx(2 * e1, rel=1e-12)


def test_profile_override_wins(algiers, dark_year):
    house = HouseSpec(zones=(Zone("a", luminaire_power=77.0, profile_override=ProfileId.PROFILE_1),),
                      location=algiers)
    scenario = find_scenario(build_scenario_grid(house, DEFAULT_CATALOG), "MD 2nd")
    result = simulate_year(house, scenario, dark_year, OCCUPANCY, SimulationConfig())
    assert result.annual_energy == pytest.approx(390.149375, rel=1e-9)


# ---------------------------------------------------------------------------
# Orderings with daylight
# ---------------------------------------------------------------------------
def test_control_orderings(house, grid, algiers_daylight):
    e = {s.id: simulate_year(house, s, algiers_daylight, OCCUPANCY, SimulationConfig()).annual_energy
         for s in grid}
    assert e["DH+Dim"] <= e["DH"] <= e["Baseline"]
    for occ in ("Sched 1st", "MD 1st", "Sched 2nd", "MD 2nd"):
        assert e[f"{occ}+DH+Dim"] <= e[f"{occ}+DH"] <= e[occ] <= e["Baseline"]
    assert e["MD 1st"] <= e["Sched 1st"]
    assert e["MD 2nd"] <= e["MD 1st"]


def test_dimming_saves_more_in_sunnier_city(algiers, stuttgart, algiers_daylight, stuttgart_daylight):
    config = SimulationConfig()
    savings = {}
    for location, daylight in ((algiers, algiers_daylight), (stuttgart, stuttgart_daylight)):
        house = default_house(location)
        grid = build_scenario_grid(house, DEFAULT_CATALOG)
        baseline = simulate_year(house, find_scenario(grid, "Baseline"), daylight, OCCUPANCY, config)
        dh = simulate_year(house, find_scenario(grid, "DH"), daylight, OCCUPANCY, config)
        savings[location.name] = 1 - dh.annual_energy / baseline.annual_energy
    assert savings["Algiers"] > savings["Stuttgart"] > 0


def test_timestep_refinement_converges():
    location = Location("Algiers", 36.72, 3.25, 1.0, "algeria", sunshine_hours=2847)
    house = default_house(location)
    scenario = find_scenario(build_scenario_grid(house, DEFAULT_CATALOG), "MD 1st+DH+Dim")
    coarse = simulate_year(house, scenario, clear_sky_series(location, 10), OCCUPANCY,
                           SimulationConfig(timestep_minutes=10)).annual_energy
    fine = simulate_year(house, scenario, clear_sky_series(location, 5), OCCUPANCY,
                         SimulationConfig(timestep_minutes=5)).annual_energy
    assert abs(coarse - fine) / fine < 0.005


def test_timestep_mismatch_rejected(house, grid, dark_year):
    with pytest.raises(ConfigError):
        _energy(house, grid, "Baseline", dark_year, SimulationConfig(timestep_minutes=5))


@pytest.mark.parametrize("changes", [
    {"timestep_minutes": 7},
    {"start_weekday": 7},
    {"hysteresis": -1.0},
    {"mode": "stochastic", "hold_time_minutes": 5},
])
def test_config_validation(changes):
    with pytest.raises(ConfigError):
        SimulationConfig(**changes)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------
@pytest.fixture
def sites(algiers, stuttgart, dark_year):
    return [Site(default_house(algiers), dark_year), Site(default_house(stuttgart), dark_year)]


def test_sweep_covers_every_cell(sites, grid):
    result = sweep(sites, grid, OCCUPANCY, SimulationConfig())
    assert len(result) == 30
    assert result.ok
    assert list(result)[0] == ("Algiers", "Baseline")
    assert list(result)[-1] == ("Stuttgart", "MD 2nd+DH+Dim")


def test_empty_sweep(sites):
    assert len(sweep(sites, [], OCCUPANCY, SimulationConfig())) == 0


def test_duplicate_site_names_rejected(sites, grid):
    with pytest.raises(ConfigError):
        sweep([sites[0], sites[0]], grid, OCCUPANCY, SimulationConfig())


def test_failing_cell_is_reported_and_others_complete(sites, grid):
    no_profiles = OccupancyInputs(profiles={})
    scenarios = [find_scenario(grid, "Baseline"), find_scenario(grid, "MD 1st")]
    result = sweep(sites, scenarios, no_profiles, SimulationConfig())
    assert len(result) == 2
    assert len(result.errors) == 2
    assert all(isinstance(e, CellError) and e.scenario_id == "MD 1st" for e in result.errors)
    assert all(e.exit_code == 2 for e in result.errors)
    with pytest.raises(CellError):
        result.raise_for_errors()


def test_stochastic_sweep_is_reproducible(sites, grid):
    config = SimulationConfig(mode=SimulationMode.STOCHASTIC, seed=42)
    scenarios = [find_scenario(grid, "MD 2nd+DH")]
    first = sweep(sites, scenarios, OCCUPANCY, config)
    second = sweep(sites, scenarios, OCCUPANCY, config)
    assert [r.annual_energy for r in first.values()] == [r.annual_energy for r in second.values()]


def test_stochastic_seed_matters(sites, grid):
    scenarios = [find_scenario(grid, "MD 1st")]
    a = sweep(sites, scenarios, OCCUPANCY, SimulationConfig(mode="stochastic", seed=1))
    b = sweep(sites, scenarios, OCCUPANCY, SimulationConfig(mode="stochastic", seed=2))
    assert a[("Algiers", "MD 1st")].annual_energy != b[("Algiers", "MD 1st")].annual_energy


def test_parallel_sweep_matches_serial(sites, grid):
    config = SimulationConfig(mode=SimulationMode.STOCHASTIC, seed=7)
    serial = sweep(sites, grid, OCCUPANCY, config, n_jobs=1)
    parallel = sweep(sites, grid, OCCUPANCY, config, n_jobs=2)
    assert list(serial) == list(parallel)
    for key in serial:
        assert serial[key].annual_energy == parallel[key].annual_energy


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, "Algiers", "MD 1st") == derive_seed(1, "Algiers", "MD 1st")
    assert derive_seed(1, "Algiers", "MD 1st") != derive_seed(1, "Stuttgart", "MD 1st")
    assert derive_seed(1, "Algiers") != derive_seed(2, "Algiers")
    assert 0 <= derive_seed(0) < 2 ** 64


def test_cell_error_exit_code_follows_cause():
    assert CellError("Algiers", "MD 1st", ConfigError("no profile")).exit_code == 2
    assert CellError("Algiers", "MD 1st", DomainError("negative")).exit_code == 1
    assert CellError("Algiers", "MD 1st", RuntimeError("boom")).exit_code == 1


def test_parallel_sweep_reports_failing_cells(sites, grid):
    scenarios = [find_scenario(grid, "Baseline"), find_scenario(grid, "MD 1st")]
    result = sweep(sites, scenarios, OccupancyInputs(profiles={}), SimulationConfig(), n_jobs=2)
    assert [(e.location, e.scenario_id, e.exit_code) for e in result.errors] == [
        ("Algiers", "MD 1st", 2), ("Stuttgart", "MD 1st", 2)]
    assert isinstance(result.errors[0].cause, ConfigError)
