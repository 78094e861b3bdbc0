"""
===============================================================================
MODULE: test_cli.py
===============================================================================

PURPOSE:
    End-to-end tests of the command-line front end.

USAGE:
    pytest tests/e2e/test_cli.py

WHAT THIS MODULE DOES:
    1. Runs estimate -> compare -> report -> ee on the bundled data
    2. Tests exit codes for success, partial failure and usage errors
    3. Tests that repeated runs with one seed produce identical files
===============================================================================
"""

import json
from pathlib import Path

import pandas as pd
import pytest

from cli.main import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, main

DATA_DIR = Path(__file__).resolve().parents[2] / "data"
LIBRARY = str(DATA_DIR / "synthetic_library.json")


@pytest.fixture
def scenario(tmp_path):
    document = json.loads((DATA_DIR / "scenarios" / "lte_miso_fft_sizes.json").read_text())
    document["stop"] = {"subframes": 1}
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document))
    return str(path)


def _estimate(scenario, out_dir, *extra):
    return main(["estimate", "--scenario", scenario, "--library", LIBRARY, "--out", str(out_dir), *extra])


def _files(root):
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file() and path.name != "manifest.json"
    }


def _manifest_without_timings(path):
    document = json.loads(path.read_text())
    document.pop("timings", None)
    for entry in document["applications"]:
        entry.pop("timings", None)
    return document


# ============================================================================
# FULL WORKFLOW
# ============================================================================

def test_estimate_compare_report_ee(tmp_path, scenario, capsys):
    out_dir = tmp_path / "out"
    manifest_path = str(out_dir / "manifest.json")

    assert _estimate(scenario, out_dir, "--seed", "7") == EXIT_OK

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["command"] == "estimate"
    assert manifest["seed"] == 7
    assert manifest["library"] == LIBRARY
    assert manifest["scenario_document"]["variable"] == {"fft_size": [256, 512, 1024, 2048]}
    for entry in manifest["applications"]:
        assert entry["status"] == "ok"
        for name in entry["files"]:
            assert (out_dir / name).exists()

    assert main(["compare", "--manifest", manifest_path,
                 "--reference", str(DATA_DIR / "reference" / "published_reference.json")]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "app4" in printed
    assert "activity_error_pct" in printed

    assert main(["report", "--manifest", manifest_path, "--breakdown"]) == EXIT_OK
    assert (out_dir / "breakdown_by_block.csv").exists()

    ee_dir = tmp_path / "ee"
    assert main(["ee", "--manifest", manifest_path, "--params", str(DATA_DIR / "ee_params.json"),
                 "--out", str(ee_dir)]) == EXIT_OK
    curves = pd.read_csv(ee_dir / "ee_curves.csv")
    assert curves.groupby(["application", "mode"]).ngroups == 8
    assert len(curves) == 8 * 61
    ee_manifest = json.loads((ee_dir / "ee_manifest.json").read_text())
    assert ee_manifest["seed"] == 7
    assert ee_manifest["pt_dbm"] == "-10:50:1"


def test_single_point_power_sweep(tmp_path, scenario):
    out_dir = tmp_path / "out"
    _estimate(scenario, out_dir)

    code = main(["ee", "--manifest", str(out_dir / "manifest.json"),
                 "--params", str(DATA_DIR / "ee_params.json"), "--pt-dbm", "20:20:1"])

    curves = pd.read_csv(out_dir / "ee_curves.csv")
    assert code == EXIT_OK
    assert len(curves) == 8
    assert set(curves["pt_dbm"]) == {20.0}


def test_manifest_lists_every_file_after_ee(tmp_path, scenario):
    """ee without --out writes into the estimate run; its files join manifest.json."""
    out_dir = tmp_path / "out"
    _estimate(scenario, out_dir)

    assert main(["ee", "--manifest", str(out_dir / "manifest.json"),
                 "--params", str(DATA_DIR / "ee_params.json"), "--pt-dbm", "20:20:1"]) == EXIT_OK

    listed = set(json.loads((out_dir / "manifest.json").read_text())["files"])
    on_disk = {
        path.relative_to(out_dir).as_posix()
        for path in out_dir.rglob("*")
        if path.is_file() and path.name != "manifest.json"
    }
    assert {"ee_curves.csv", "ee_manifest.json"} <= listed
    assert on_disk == listed


def test_runs_are_reproducible(tmp_path, scenario):
    first, second = tmp_path / "first", tmp_path / "second"

    assert _estimate(scenario, first, "--jobs", "4") == EXIT_OK
    assert _estimate(scenario, second, "--jobs", "1") == EXIT_OK

    assert _files(first) == _files(second)
    assert _manifest_without_timings(first / "manifest.json") == _manifest_without_timings(second / "manifest.json")


def test_dump_samples(tmp_path, scenario):
    out_dir = tmp_path / "out"

    assert _estimate(scenario, out_dir, "--dump-samples") == EXIT_OK

    samples = pd.read_csv(out_dir / "app1" / "samples_sink_0.csv")
    assert len(samples) == 2 * 15360 * 256 // 2048


# ============================================================================
# EXIT CODES
# ============================================================================

def test_partial_failure_exit_code(tmp_path, scenario):
    document = json.loads(Path(LIBRARY).read_text())
    document["records"] = [r for r in document["records"] if r["parameters"].get("fft_size") != 2048]
    library = tmp_path / "library.json"
    library.write_text(json.dumps(document))

    code = main(["estimate", "--scenario", scenario, "--library", str(library), "--out", str(tmp_path / "out")])

    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert code == EXIT_PARTIAL
    assert [e["status"] for e in manifest["applications"]] == ["ok", "ok", "ok", "failed"]


@pytest.mark.parametrize("argv", [
    [],
    ["estimate", "--scenario", "x.json"],
    ["simulate"],
    ["report", "--manifest", "absent/manifest.json"],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_unreadable_inputs(tmp_path, scenario):
    assert _estimate(str(tmp_path / "absent.json"), tmp_path / "out") == EXIT_USAGE
    assert main(["estimate", "--scenario", scenario, "--library", str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "out")]) == EXIT_USAGE
    assert _estimate(scenario, tmp_path / "out", "--jobs", "0") == EXIT_USAGE


def test_commands_need_an_estimate_manifest(tmp_path):
    assert main(["compare", "--manifest", str(tmp_path / "manifest.json")]) == EXIT_USAGE
    assert main(["report", "--manifest", str(tmp_path / "manifest.json"), "--breakdown"]) == EXIT_USAGE


def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_OK


# ============================================================================
# STUDY SCRIPT
# ============================================================================

def test_run_study_script(monkeypatch, tmp_path, scenario):
    from scripts import run_study

    out_dir = tmp_path / "study"
    monkeypatch.setattr("sys.argv", ["run_study.py", "--scenario", scenario, "--out", str(out_dir), "--skip-ee"])

    assert run_study.main() == EXIT_OK
    assert (out_dir / "compare.csv").exists()
    assert (out_dir / "breakdown_by_block.csv").exists()
    assert not (out_dir / "ee").exists()


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
