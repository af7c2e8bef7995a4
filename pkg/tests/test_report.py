import csv
import json

import pytest

from econ import Emissions, MetricsReport
from manifest import TOOL_VERSION, ManifestFile, RunManifest, file_digest
from model import CLEAR_SKY
from report import RESULT_COLUMNS, format_table_as_markdown, frame_records, metrics_frame, write_results


def _report(scenario, energy, capex=0.0, payback=None, irr=None):
    return MetricsReport(
        location="Stuttgart",
        scenario_id=scenario,
        annual_energy=energy,
        annual_cost=energy * 0.3048,
        capex=capex,
        annual_inflow=(674.52 - energy) * 0.3048,
        payback=payback,
        npv=12.3456,
        irr=irr,
        adi=100.0,
        emissions=Emissions(energy * 0.516, energy * 0.44, energy * 0.29, energy * 0.23, energy * 0.184),
    )


@pytest.fixture
def reports():
    return [
        _report("Baseline", 674.52, payback=0.0),
        _report("MD 1st", 390.149375, capex=373.10, payback=4.3051, irr=0.2345678),
        _report("DH", 674.52, capex=398.37),
    ]


# ---------------------------------------------------------------------------
# Result tables
# ---------------------------------------------------------------------------
def test_frame_columns_in_order(reports):
    frame = metrics_frame(reports)
    assert list(frame.columns) == list(RESULT_COLUMNS)
    assert len(frame) == 3


def test_irr_reported_as_percent(reports):
    frame = metrics_frame(reports)
    assert frame.loc[1, "irr_pct"] == pytest.approx(23.45678)


def test_undefined_metrics_are_null(reports):
    records = frame_records(metrics_frame(reports))
    assert records[0]["irr_pct"] is None
    assert records[2]["payback_yr"] is None
    assert records[0]["payback_yr"] == 0.0


def test_records_are_rounded(reports):
    record = frame_records(metrics_frame(reports))[1]
    assert record["energy_kWh"] == 390.15
    assert record["irr_pct"] == 23.4568
    assert record["npv_eur"] == 12.35
    assert record["scenario"] == "MD 1st"


def test_csv_and_json_agree(tmp_path, reports):
    write_results(reports, tmp_path)
    with open(tmp_path / "results.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    records = json.loads((tmp_path / "results.json").read_text(encoding="utf-8"))
    assert len(rows) == len(records) == 3
    for row, record in zip(rows, records):
        for column, text in row.items():
            if text == "":
                assert record[column] is None
            elif RESULT_COLUMNS[column] is None:
                assert record[column] == text
            else:
                assert float(text) == record[column]


def test_csv_layout(tmp_path, reports):
    write_results(reports, tmp_path)
    raw = (tmp_path / "results.csv").read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == ",".join(RESULT_COLUMNS)
    assert lines[1].startswith("Stuttgart,Baseline,674.52,")
    assert ",," in lines[1]  # empty irr cell


def test_summary_written(tmp_path, reports):
    write_results(reports, tmp_path)
    summary = (tmp_path / "summary.md").read_text(encoding="utf-8")
    assert "**Row Count:** 3" in summary
    assert "*n/a*" in summary


def test_empty_table_markdown():
    assert "*No rows*" in format_table_as_markdown(metrics_frame([]), "results")


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------
@pytest.fixture
def manifest(tmp_path):
    config = tmp_path / "study.json"
    config.write_text("{}", encoding="utf-8")
    weather = tmp_path / "city.epw"
    weather.write_text("LOCATION", encoding="utf-8")
    return RunManifest(
        config_path=str(config),
        weather_paths={"City": str(weather), "Elsewhere": CLEAR_SKY},
        mode="expected",
        seed=3,
        timestep_minutes=10,
        output_dir=str(tmp_path),
    ).compute_digests()


def test_digests_cover_files_only(manifest):
    assert set(manifest.digests) == {manifest.config_path, manifest.weather_paths["City"]}
    assert manifest.digests[manifest.config_path] == file_digest(manifest.config_path)


def test_manifest_round_trip(tmp_path, manifest):
    store = ManifestFile(tmp_path / "manifest.json")
    store.write(manifest)
    loaded = store.read()
    assert loaded == manifest
    assert loaded.tool_version == TOOL_VERSION
    document = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert "written_at" in document["metadata"]


def test_verify_detects_changed_input(tmp_path, manifest):
    store = ManifestFile(tmp_path / "manifest.json")
    store.write(manifest)
    assert all(store.verify().values())
    (tmp_path / "city.epw").write_text("CHANGED", encoding="utf-8")
    checks = store.verify()
    assert checks[manifest.config_path] is True
    assert checks[manifest.weather_paths["City"]] is False


def test_missing_manifest(tmp_path):
    store = ManifestFile(tmp_path / "absent.json")
    assert store.read() is None
    assert store.verify() == {}
