"""
===============================================================================
MODULE: loader.py
===============================================================================

PURPOSE:
    Parses scenario files and instantiates their applications: binds the
    variable axes, derives bandwidth <-> IFFT size, builds each application's
    transmitter topology and its power-library keys.

WHEN TO USE THIS MODULE:
    - First step of `actisim estimate`
    - Checking which configurations a scenario needs before characterizing

USAGE EXAMPLES:
    from scenario.loader import enumerate_applications, parse_scenario

    spec = parse_scenario("data/scenarios/lte_miso_fft_sizes.json")
    apps = enumerate_applications(spec, library=library)
    for app in apps:
        app.require_resolved()

ENUMERATION ORDER:
    combine="product": Cartesian product in axis declaration order, the
    first axis varying slowest. combine="zip": i-th value of every axis.
    Applications are named app1..appN in that order.

PRECEDENCE:
    clock_mhz and fpga_part may be given at scenario level and as
    parameters; the scenario-level value wins and a warning is logged.
===============================================================================
"""

import itertools
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Union

from pydantic import ValidationError

from lte_baseband.modulation import canonical_modulation
from lte_baseband.params import bandwidth_for_fft_size, fft_size_for_bandwidth, params_for_fft_size
from lte_baseband.topology import cycles_per_subframe, lte_topology, symbols_per_subframe
from power_model_library.models import PowerLibrary
from scenario.models import ApplicationSpec, ScenarioSpec
from sim_kernel.kernel import StopCondition
from sim_kernel.topology import build_system
from utils.exceptions import ActisimError, ScenarioError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

# Cap on simulated cycles per requested sub-frame, as a multiple of 1 ms
SUBFRAME_CYCLE_CAP_FACTOR = 100


def parse_scenario(source: Union[str, Path, Mapping[str, Any]]) -> ScenarioSpec:
    """
    Load and validate a scenario.

    ARGUMENTS:
        source: path to a scenario JSON file, or an already-decoded dict

    RAISES:
        ScenarioError: unreadable file, schema violation, unknown parameter,
            empty axis, or fixed/variable overlap
    """
    origin = "<memory>"
    if isinstance(source, (str, Path)):
        origin = str(source)
        try:
            document = json.loads(Path(source).read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise ScenarioError(f"Scenario file not found: {source}") from e
        except json.JSONDecodeError as e:
            raise ScenarioError(f"{source}: invalid JSON ({e})") from e
    else:
        document = source

    try:
        spec = ScenarioSpec.model_validate(document)
    except ValidationError as e:
        raise ScenarioError(f"{origin}: {e}") from e

    logger.debug(
        f"Parsed scenario {spec.name}: axes={spec.axis_names}, {spec.application_count()} applications"
    )
    return spec


def iter_bindings(spec: ScenarioSpec) -> Iterator[Dict[str, Any]]:
    names = spec.axis_names
    if not names:
        yield {}
        return
    axes = [spec.variable[name] for name in names]
    combos = zip(*axes) if spec.combine == "zip" else itertools.product(*axes)
    for values in combos:
        yield dict(zip(names, values))


def _scenario_level(spec: ScenarioSpec, params: Dict[str, Any], name: str, value: Any, app_name: str) -> None:
    if value is None:
        return
    if name in params and params[name] != value:
        logger.warning(
            f"⚠️  {app_name}: {name}={params[name]} overridden by scenario-level {name}={value}"
        )
    params[name] = value


def _resolve_fft(params: Dict[str, Any], app_name: str) -> None:
    has_fft = "fft_size" in params
    has_bw = "bandwidth_mhz" in params
    try:
        if has_fft and has_bw:
            expected = fft_size_for_bandwidth(params["bandwidth_mhz"])
            if int(params["fft_size"]) != expected:
                raise ScenarioError(
                    f"{app_name}: bandwidth_mhz={params['bandwidth_mhz']} implies fft_size={expected}, "
                    f"but fft_size={params['fft_size']} was given"
                )
        elif has_fft:
            params["bandwidth_mhz"] = bandwidth_for_fft_size(params["fft_size"])
        elif has_bw:
            params["fft_size"] = fft_size_for_bandwidth(params["bandwidth_mhz"])
        else:
            raise ScenarioError(f"{app_name}: needs fft_size or bandwidth_mhz")
    except ScenarioError:
        raise
    except ActisimError as e:
        raise ScenarioError(f"{app_name}: {e}") from e
    params["fft_size"] = int(params["fft_size"])
    params["bandwidth_mhz"] = float(params["bandwidth_mhz"])


def _check_values(params: Dict[str, Any], app_name: str) -> None:
    rate = params.get("coding_rate")
    if rate is not None:
        as_float = None
        if isinstance(rate, str) and "/" in rate:
            numerator, denominator = rate.split("/", 1)
            as_float = float(numerator) / float(denominator)
        elif isinstance(rate, (int, float)):
            as_float = float(rate)
        if as_float is None or not math.isclose(as_float, 1 / 3, rel_tol=1e-6):
            raise ScenarioError(f"{app_name}: only coding_rate 1/3 is supported, got {rate!r}")
    if "modulation" in params:
        try:
            params["modulation"] = canonical_modulation(params["modulation"])
        except ActisimError as e:
            raise ScenarioError(f"{app_name}: {e}") from e
    if int(params.get("tx_antennas", 2)) not in (1, 2):
        raise ScenarioError(f"{app_name}: tx_antennas must be 1 or 2, got {params['tx_antennas']}")


def build_application(
    spec: ScenarioSpec,
    index: int,
    bindings: Mapping[str, Any],
    library: Optional[PowerLibrary] = None
) -> ApplicationSpec:
    name = f"app{index + 1}"
    params: Dict[str, Any] = {**spec.fixed, **bindings}
    _scenario_level(spec, params, "clock_mhz", spec.clock_mhz, name)
    _scenario_level(spec, params, "fpga_part", spec.fpga_part, name)
    _resolve_fft(params, name)
    _check_values(params, name)

    try:
        topology = lte_topology(
            params,
            name=f"{spec.name}_{name}",
            custom_parameters=spec.custom_parameters,
        )
        system = build_system(topology)
        ofdm = params_for_fft_size(params["fft_size"], params.get("cp_mode", "normal"))
    except ScenarioError:
        raise
    except ActisimError as e:
        raise ScenarioError(f"{name}: {e}") from e

    # normalized block parameters (defaults filled in) plus study-level values
    resolved = {**params, **topology.instances[0].parameters}
    keys = system.config_keys()
    unresolved = ()
    if library is not None:
        unresolved = tuple((iid, key) for iid, key in keys.items() if key not in library)
        for iid, key in unresolved:
            logger.warning(f"⚠️  {name}: {iid} configuration {key} is not in the power library")

    return ApplicationSpec(
        name=name,
        index=index,
        scenario_name=spec.name,
        bindings=dict(bindings),
        parameters=resolved,
        ofdm=ofdm,
        topology=topology,
        config_keys=keys,
        stop=spec.stop,
        fpga_part=params.get("fpga_part"),
        unresolved=unresolved,
    )


def enumerate_applications(spec: ScenarioSpec, library: Optional[PowerLibrary] = None) -> List[ApplicationSpec]:
    """
    Instantiate every application of a scenario.

    With a library, each application records the configuration keys the
    library lacks; ApplicationSpec.require_resolved() turns that into an
    error for that application only.

    RAISES:
        ScenarioError: inconsistent bandwidth/IFFT size or unsupported values
    """
    applications = [
        build_application(spec, index, bindings, library)
        for index, bindings in enumerate(iter_bindings(spec))
    ]
    logger.info(f"✅ Scenario {spec.name}: {len(applications)} applications")
    return applications


def stop_condition(app: ApplicationSpec) -> StopCondition:
    """Kernel stop condition: sub-frames become a per-antenna symbol quota."""
    if app.stop.cycles is not None:
        return StopCondition(cycles=app.stop.cycles)
    subframes = app.stop.subframes
    return StopCondition(
        sink_tokens=subframes * symbols_per_subframe(app.parameters),
        max_cycles=SUBFRAME_CYCLE_CAP_FACTOR * (subframes + 1) * cycles_per_subframe(app.parameters),
    )
