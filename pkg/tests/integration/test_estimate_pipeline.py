"""
===============================================================================
MODULE: test_estimate_pipeline.py
===============================================================================

PURPOSE:
    Integration tests for scenario -> simulation -> power estimate runs.

USAGE:
    pytest tests/integration/test_estimate_pipeline.py

WHAT THIS MODULE DOES:
    1. Runs the four IFFT-size applications against the synthetic library
    2. Tests per-application failure isolation (missing record, deadlock)
    3. Tests the breakdown and comparison commands on a finished run
===============================================================================
"""

import json
from pathlib import Path

import pandas as pd
import pytest

from cli.commands import cmd_compare, cmd_estimate, cmd_report, load_reports
from cli.manifest import load_manifest
from estimator.power import power_breakdown
from sim_kernel.kernel import simulate
from utils.exceptions import DeadlockError

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


@pytest.fixture
def scenario_path(tmp_path):
    """The four-application scenario cut down to one sub-frame."""
    document = json.loads((DATA_DIR / "scenarios" / "lte_miso_fft_sizes.json").read_text())
    document["stop"] = {"subframes": 1}
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document))
    return path


@pytest.fixture
def library_without_ifft_2048(tmp_path):
    document = json.loads((DATA_DIR / "synthetic_library.json").read_text())
    document["records"] = [
        record for record in document["records"]
        if not (record["ip_name"] == "ifft" and record["parameters"].get("fft_size") == 2048)
    ]
    path = tmp_path / "library.json"
    path.write_text(json.dumps(document))
    return path


@pytest.fixture
def finished_run(tmp_path, scenario_path):
    out_dir = tmp_path / "out"
    cmd_estimate(scenario_path, DATA_DIR / "synthetic_library.json", out_dir, seed=2016, jobs=2)
    return out_dir / "manifest.json"


def test_all_applications_estimated(finished_run):
    manifest = load_manifest(finished_run)

    assert [entry.name for entry in manifest.applications] == ["app1", "app2", "app3", "app4"]
    assert not manifest.failed
    for entry in manifest.applications:
        assert entry.cumulative_mw > entry.activity_weighted_mw > 0
        assert (finished_run.parent / entry.directory / "trace.csv").exists()
        assert f"{entry.name}/report_activity.json" in manifest.files


def test_ifft_dominates_every_application(finished_run):
    for report in load_reports(finished_run):
        breakdown = power_breakdown(report)
        assert breakdown.dominant_block() == "ifft"


def test_power_grows_with_fft_size(finished_run):
    totals = [entry.activity_weighted_mw for entry in load_manifest(finished_run).applications]

    assert totals == sorted(totals)


def test_missing_record_fails_only_that_application(tmp_path, scenario_path, library_without_ifft_2048):
    manifest = cmd_estimate(scenario_path, library_without_ifft_2048, tmp_path / "out", jobs=1)

    assert [entry.name for entry in manifest.failed] == ["app4"]
    assert "app4/ifft_0" in manifest.failed[0].error
    assert len(manifest.succeeded) == 3
    assert not (tmp_path / "out" / "app4" / "report_activity.json").exists()


def test_deadlock_fails_only_that_application(mocker, tmp_path, scenario_path):
    def flaky_simulate(system, stop, seed=0, app=None):
        if app == "app2":
            raise DeadlockError(123, {"ifft_0": "reading"})
        return simulate(system, stop, seed=seed, app=app)

    mocker.patch("cli.commands.simulate", side_effect=flaky_simulate)

    manifest = cmd_estimate(scenario_path, DATA_DIR / "synthetic_library.json", tmp_path / "out", jobs=1)

    assert [entry.name for entry in manifest.failed] == ["app2"]
    assert "Deadlock at cycle 123" in manifest.failed[0].error


def test_parallel_and_serial_runs_match(tmp_path, scenario_path, finished_run):
    serial = cmd_estimate(scenario_path, DATA_DIR / "synthetic_library.json", tmp_path / "serial", seed=2016, jobs=1)

    parallel = load_manifest(finished_run)

    assert [e.activity_weighted_mw for e in serial.applications] == [e.activity_weighted_mw for e in parallel.applications]
    for name in parallel.files:
        assert (tmp_path / "serial" / name).read_bytes() == (finished_run.parent / name).read_bytes()


def test_report_and_compare(tmp_path, finished_run):
    breakdown = pd.read_csv(cmd_report(finished_run))
    table = cmd_compare(finished_run, DATA_DIR / "reference" / "published_reference.json", tmp_path / "out" / "compare.csv")

    assert breakdown["application"].tolist() == ["app1", "app2", "app3", "app4"]
    assert "ifft" in breakdown.columns
    assert table["reference_mw"].tolist() == [118.64, 159.01, 195.07, 227.01]
    for entry, row in zip(load_manifest(finished_run).applications, table.itertuples()):
        assert row.measured_time_s == pytest.approx(entry.timings["simulate_s"] + entry.timings["estimate_s"])
        assert row.speedup == pytest.approx(row.reference_time_s / row.measured_time_s)
    assert "compare.csv" in load_manifest(finished_run).files
    assert "breakdown_by_block.csv" in load_manifest(finished_run).files


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
