"""
===============================================================================
MODULE: test_scenario.py
===============================================================================

PURPOSE:
    Unit tests for scenario parsing and application enumeration.

USAGE:
    pytest tests/unit/test_scenario.py

WHAT THIS MODULE DOES:
    1. Tests the bundled scenarios enumerate the expected applications
    2. Tests bandwidth / IFFT size derivation and consistency checks
    3. Tests validation errors (unknown parameters, overlaps, zip lengths)
    4. Tests library resolution and stop conditions
===============================================================================
"""

from pathlib import Path

import pytest

from power_model_library.csv_import import import_characterization_csv
from power_model_library.library import load_library
from power_model_library.models import IpConfigKey
from scenario.loader import enumerate_applications, iter_bindings, parse_scenario, stop_condition
from utils.exceptions import ScenarioError, UnresolvedKeyError

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


@pytest.fixture
def base_document():
    return {
        "name": "unit",
        "fixed": {"modulation": "QPSK", "tx_antennas": 2, "quantization_bits": 14},
        "variable": {"fft_size": [256, 512]},
        "clock_mhz": 50,
        "stop": {"subframes": 1},
    }


@pytest.fixture(scope="module")
def synthetic_library():
    return load_library(DATA_DIR / "synthetic_library.json")


# ============================================================================
# BUNDLED SCENARIOS
# ============================================================================

def test_four_application_scenario(synthetic_library):
    spec = parse_scenario(DATA_DIR / "scenarios" / "lte_miso_fft_sizes.json")

    apps = enumerate_applications(spec, library=synthetic_library)

    assert [app.name for app in apps] == ["app1", "app2", "app3", "app4"]
    assert [app.parameters["fft_size"] for app in apps] == [256, 512, 1024, 2048]
    assert [app.parameters["bandwidth_mhz"] for app in apps] == [3.0, 5.0, 10.0, 20.0]
    assert all(app.is_resolved for app in apps)
    assert apps[3].config_keys["ifft_0"] == IpConfigKey.of(
        "ifft", clock_mhz=50, fft_size=2048, quantization_bits=14
    )
    assert apps[0].label == "fft_size=256"


def test_zip_scenario_resolves_after_csv_import(synthetic_library):
    spec = parse_scenario(DATA_DIR / "scenarios" / "zip_example.json")
    enriched = import_characterization_csv(DATA_DIR / "characterization_example.csv", synthetic_library)

    before = enumerate_applications(spec, library=synthetic_library)
    after = enumerate_applications(spec, library=enriched)

    assert len(after) == 2
    assert [app.parameters["fft_size"] for app in after] == [512, 1024]
    assert [app.parameters["modulation"] for app in after] == ["QPSK", "16QAM"]
    assert not before[0].is_resolved
    assert all(app.is_resolved for app in after)


# ============================================================================
# ENUMERATION
# ============================================================================

def test_product_order_first_axis_slowest(base_document):
    base_document["variable"]["modulation"] = ["QPSK", "16QAM"]
    del base_document["fixed"]["modulation"]

    bindings = list(iter_bindings(parse_scenario(base_document)))

    assert bindings == [
        {"fft_size": 256, "modulation": "QPSK"},
        {"fft_size": 256, "modulation": "16QAM"},
        {"fft_size": 512, "modulation": "QPSK"},
        {"fft_size": 512, "modulation": "16QAM"},
    ]


def test_no_variable_axes_gives_one_application(base_document):
    base_document["variable"] = {}
    base_document["fixed"]["fft_size"] = 1024

    apps = enumerate_applications(parse_scenario(base_document))

    assert len(apps) == 1
    assert apps[0].label == "app1"


def test_bandwidth_drives_fft_size(base_document):
    base_document["variable"] = {"bandwidth_mhz": [1.4, 15]}

    apps = enumerate_applications(parse_scenario(base_document))

    assert [app.parameters["fft_size"] for app in apps] == [128, 1536]


def test_inconsistent_bandwidth_and_fft(base_document):
    base_document["fixed"]["bandwidth_mhz"] = 10

    with pytest.raises(ScenarioError, match="implies fft_size=1024"):
        enumerate_applications(parse_scenario(base_document))


def test_custom_parameter_enters_keys(base_document):
    base_document["custom_parameters"] = {"scrambler_seed": ["channel_coder"]}
    base_document["fixed"]["scrambler_seed"] = 7

    app = enumerate_applications(parse_scenario(base_document))[0]

    assert app.config_keys["coder"].as_dict()["scrambler_seed"] == 7
    assert "scrambler_seed" not in app.config_keys["mapper"].as_dict()


def test_single_antenna_chain(base_document):
    base_document["fixed"]["tx_antennas"] = 1

    app = enumerate_applications(parse_scenario(base_document))[0]

    assert "alamouti" not in app.config_keys
    assert "ifft_1" not in app.config_keys


def test_scenario_level_clock_wins(base_document):
    base_document["fixed"]["clock_mhz"] = 100

    app = enumerate_applications(parse_scenario(base_document))[0]

    assert app.clock_mhz == 50.0


# ============================================================================
# VALIDATION
# ============================================================================

@pytest.mark.parametrize("mutate", [
    lambda d: d["fixed"].update(warp_factor=9),
    lambda d: d["fixed"].update(fft_size=256),
    lambda d: d["variable"].update(modulation=[]),
    lambda d: d.update(combine="zip", variable={"fft_size": [256, 512], "modulation": ["QPSK"]}),
    lambda d: d.update(custom_parameters={"fft_size": ["ifft"]}),
    lambda d: d.update(stop={"subframes": 1, "cycles": 10}),
    lambda d: d.update(surprise=True),
])
def test_invalid_scenarios(base_document, mutate):
    mutate(base_document)

    with pytest.raises(ScenarioError):
        parse_scenario(base_document)


@pytest.mark.parametrize("field, value", [("coding_rate", "1/2"), ("tx_antennas", 4), ("modulation", "8PSK")])
def test_unsupported_values(base_document, field, value):
    base_document["fixed"][field] = value

    with pytest.raises(ScenarioError):
        enumerate_applications(parse_scenario(base_document))


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError):
        parse_scenario(tmp_path / "absent.json")


# ============================================================================
# LIBRARY RESOLUTION / STOP
# ============================================================================

def test_unresolved_key_names_application_and_instance(base_document, synthetic_library):
    base_document["variable"]["fft_size"] = [256, 1536]

    apps = enumerate_applications(parse_scenario(base_document), library=synthetic_library)

    apps[0].require_resolved()
    with pytest.raises(UnresolvedKeyError) as excinfo:
        apps[1].require_resolved()
    assert excinfo.value.owner.startswith("app2/")
    assert excinfo.value.key.as_dict()["fft_size"] == 1536


def test_subframe_stop_condition(base_document):
    base_document["stop"] = {"subframes": 5}

    app = enumerate_applications(parse_scenario(base_document))[0]
    stop = stop_condition(app)

    assert stop.sink_tokens == 70
    assert stop.cycles is None
    assert stop.max_cycles > 5 * 50_000


def test_cycle_stop_condition(base_document):
    base_document["stop"] = {"cycles": 12345}

    stop = stop_condition(enumerate_applications(parse_scenario(base_document))[0])

    assert stop.cycles == 12345


if __name__ == "__main__":
    pytest.main([__file__, '-v'])
