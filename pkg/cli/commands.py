"""
===============================================================================
MODULE: commands.py
===============================================================================

PURPOSE:
    The four commands of the front end, usable from Python as well as from
    the command line:

        cmd_estimate  scenario + library -> simulated applications, power reports
        cmd_ee        estimate manifest + EE params -> EE curves
        cmd_compare   estimate manifest -> activity-weighted vs cumulative table
        cmd_report    estimate manifest -> breakdown grouped by block type

USAGE EXAMPLES:
    from cli.commands import cmd_estimate, cmd_ee

    manifest = cmd_estimate("data/scenarios/lte_miso_fft_sizes.json",
                            "data/synthetic_library.json", "out", seed=2016)
    ee = cmd_ee("out/manifest.json", "data/ee_params.json", "-10:50:1", "out/ee")

ERROR HANDLING:
    Errors while loading the scenario or library abort the command. Errors
    inside one application (missing library record, deadlock, cycle cap)
    mark that application failed in the manifest; the others still run.

CONCURRENCY:
    Applications run on a thread pool. Each writes only inside its own
    directory and shares only immutable inputs, so parallel and serial runs
    produce the same files.
===============================================================================
"""

import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from ee_analyzer.capacity import curves_to_csv, ee_sweep
from ee_analyzer.models import load_ee_params
from estimator.power import PowerReport, cumulative_power, estimate_power, power_breakdown
from estimator.reports import (
    ApplicationTotals,
    breakdown_to_csv,
    compare_table,
    load_reference,
    report_to_csv,
    report_to_json,
)
from cli.manifest import (
    EE_MANIFEST_NAME,
    MANIFEST_NAME,
    ApplicationEntry,
    RunManifest,
    load_manifest,
    register_output,
    write_manifest,
)
from lte_baseband.blocks import concatenate_samples
from lte_baseband.sample_dump import dump_samples_csv
from power_model_library.library import load_library, lookup
from power_model_library.models import PowerLibrary
from scenario.loader import enumerate_applications, parse_scenario, stop_condition
from scenario.models import ApplicationSpec
from sim_kernel.kernel import simulate
from sim_kernel.topology import build_system, save_topology
from sim_kernel.trace import export_trace_csv
from utils.config import DEFAULT_PT_DBM_RANGE, DEFAULT_SEED, get_runtime_config
from utils.exceptions import ActisimError, ManifestError
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

PathLike = Union[str, Path]

BREAKDOWN_BY_BLOCK_NAME = "breakdown_by_block.csv"
EE_CURVES_NAME = "ee_curves.csv"


# ============================================================================
# ESTIMATE
# ============================================================================

def run_application(
    app: ApplicationSpec,
    library: PowerLibrary,
    out_dir: Path,
    seed: int,
    dump_samples: bool = False
) -> ApplicationEntry:
    """
    Simulate one application and write its result directory.

    RETURNS:
        ApplicationEntry: status "ok" with totals and files, or "failed"
            with the error message
    """
    app_dir = out_dir / app.name
    entry = ApplicationEntry(
        name=app.name,
        label=app.label,
        directory=app.name,
        bindings=dict(app.bindings),
    )
    try:
        app.require_resolved()
        system = build_system(app.topology, library=library)

        started = time.perf_counter()
        result = simulate(system, stop_condition(app), seed=seed, app=app.name)
        entry.timings["simulate_s"] = time.perf_counter() - started

        started = time.perf_counter()
        alphas = result.alphas()
        records = {iid: lookup(library, key) for iid, key in app.config_keys.items()}
        activity = estimate_power(alphas, records, application=app.name,
                                  static_power_mw=library.static_power_mw)
        cumulative = cumulative_power(records, application=app.name,
                                      static_power_mw=library.static_power_mw)
        breakdown = power_breakdown(activity)
        entry.timings["estimate_s"] = time.perf_counter() - started

        written = [
            save_topology(app.topology, app_dir / "topology.json"),
            export_trace_csv(result.trace, app_dir / "trace.csv", alphas),
            report_to_json(activity, app_dir / "report_activity.json"),
            report_to_csv(activity, app_dir / "report_activity.csv"),
            report_to_json(cumulative, app_dir / "report_cumulative.json"),
            report_to_csv(cumulative, app_dir / "report_cumulative.csv"),
            breakdown_to_csv([breakdown], app_dir / "breakdown.csv"),
        ]
        if dump_samples:
            for sink_id, tokens in result.outputs.items():
                written.append(dump_samples_csv(concatenate_samples(tokens), app_dir / f"samples_{sink_id}.csv"))

        entry.files = sorted(path.relative_to(out_dir).as_posix() for path in written)
        entry.simulated_cycles = result.trace.t_sim_cycles
        entry.activity_weighted_mw = activity.total_mw
        entry.cumulative_mw = cumulative.total_mw
        logger.info(
            f"✅ {app.name} ({app.label}): {activity.total_mw:.2f} mW activity-weighted, "
            f"{cumulative.total_mw:.2f} mW cumulative"
        )
    except ActisimError as e:
        entry.status = "failed"
        entry.error = str(e)
        logger.error(f"❌ {app.name} failed: {e}")
    return entry


def cmd_estimate(
    scenario_path: PathLike,
    library_path: PathLike,
    out_dir: PathLike,
    seed: int = DEFAULT_SEED,
    jobs: Optional[int] = None,
    dump_samples: bool = False
) -> RunManifest:
    """
    Simulate every application of a scenario and estimate its power.

    RETURNS:
        RunManifest: written to out_dir/manifest.json

    RAISES:
        ScenarioError, LibraryParseError: unreadable inputs (nothing is run)
    """
    out_dir = Path(out_dir)
    library = load_library(library_path)
    spec = parse_scenario(scenario_path)
    applications = enumerate_applications(spec, library=library)

    if jobs is None:
        jobs = min(len(applications), get_runtime_config()["max_jobs"])
    jobs = max(1, jobs)
    logger.info(f"Running {len(applications)} applications on {jobs} worker(s)")

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        entries = list(pool.map(
            lambda app: run_application(app, library, out_dir, seed, dump_samples),
            applications,
        ))

    manifest = RunManifest(
        command="estimate",
        seed=seed,
        scenario=str(scenario_path),
        scenario_document=spec.model_dump(mode="json"),
        library=str(library_path),
        applications=entries,
        files=sorted(f for entry in entries for f in entry.files),
        timings={"total_s": time.perf_counter() - started},
    )
    write_manifest(manifest, out_dir / MANIFEST_NAME)

    if manifest.failed:
        logger.warning(f"⚠️  {len(manifest.failed)} of {len(entries)} applications failed")
    else:
        logger.info(f"✅ All {len(entries)} applications estimated, results in {out_dir}")
    return manifest


# ============================================================================
# READING AN ESTIMATE RUN
# ============================================================================

def _estimate_manifest(manifest_path: PathLike) -> Tuple[Path, RunManifest]:
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    if manifest.command != "estimate":
        raise ManifestError(f"{manifest_path} was written by '{manifest.command}', not 'estimate'")
    return manifest_path.parent, manifest


def load_reports(manifest_path: PathLike, kind: str = "activity") -> List[PowerReport]:
    """Power reports of the successful applications, in manifest order."""
    root, manifest = _estimate_manifest(manifest_path)
    reports = []
    for entry in manifest.succeeded:
        path = root / entry.directory / f"report_{kind}.json"
        try:
            reports.append(PowerReport.model_validate_json(path.read_text(encoding="utf-8")))
        except FileNotFoundError as e:
            raise ManifestError(f"{entry.name}: missing {path}") from e
    return reports


# ============================================================================
# EE
# ============================================================================

def cmd_ee(
    manifest_path: PathLike,
    params_path: PathLike,
    pt_range: Optional[str] = None,
    out_dir: Optional[PathLike] = None,
    seed: Optional[int] = None
) -> RunManifest:
    """
    EE curves of every successful application, without and with circuit power.

    pt_range falls back to the params file, then to -10:50:1; seed falls
    back to the estimate manifest's seed.

    RETURNS:
        RunManifest: written to out_dir/ee_manifest.json
    """
    root, estimate = _estimate_manifest(manifest_path)
    out_dir = Path(out_dir) if out_dir is not None else root
    config = load_ee_params(params_path)
    pt_range = pt_range or config.pt_dbm or DEFAULT_PT_DBM_RANGE
    seed = estimate.seed if seed is None else seed

    if estimate.scenario_document is None:
        raise ManifestError(f"{manifest_path} does not record its scenario")
    applications = {app.name: app for app in enumerate_applications(parse_scenario(estimate.scenario_document))}
    reports = load_reports(manifest_path, "activity")
    pairs = [(applications[report.application], report) for report in reports]

    started = time.perf_counter()
    curves = ee_sweep(pairs, pt_range, config, seed=seed)
    elapsed = time.perf_counter() - started
    curves_to_csv(curves, out_dir / EE_CURVES_NAME)

    manifest = RunManifest(
        command="ee",
        seed=seed,
        source_manifest=str(manifest_path),
        params=str(params_path),
        pt_dbm=pt_range,
        n_samples=config.n_samples,
        applications=[
            ApplicationEntry(name=app.name, label=app.label, bindings=dict(app.bindings))
            for app, _ in pairs
        ],
        files=[EE_CURVES_NAME],
        timings={"sweep_s": elapsed},
    )
    write_manifest(manifest, out_dir / EE_MANIFEST_NAME)
    # outputs written inside the estimate run stay listed in its manifest
    for name in (EE_CURVES_NAME, EE_MANIFEST_NAME):
        register_output(manifest_path, out_dir / name)
    logger.info(f"✅ {len(curves)} EE curves written to {out_dir / EE_CURVES_NAME}")
    return manifest


# ============================================================================
# COMPARE / REPORT
# ============================================================================

def _estimation_time(entry: ApplicationEntry) -> Optional[float]:
    """Wall-clock simulate + estimate time of one application, if recorded."""
    phases = [entry.timings.get(name) for name in ("simulate_s", "estimate_s")]
    if any(value is None for value in phases):
        return None
    return sum(phases)


def cmd_compare(
    manifest_path: PathLike,
    reference_path: Optional[PathLike] = None,
    out_path: Optional[PathLike] = None
) -> pd.DataFrame:
    """Activity-weighted against cumulative totals, optionally against a reference."""
    _, manifest = _estimate_manifest(manifest_path)
    totals = [
        ApplicationTotals(
            application=entry.name,
            label=entry.label,
            activity_weighted_mw=entry.activity_weighted_mw,
            cumulative_mw=entry.cumulative_mw,
            measured_time_s=_estimation_time(entry),
        )
        for entry in manifest.succeeded
    ]
    reference = load_reference(reference_path) if reference_path is not None else None
    table = compare_table(totals, reference)

    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(table.to_csv(index=False, lineterminator="\n"), encoding="utf-8")
        register_output(manifest_path, out_path)
        logger.info(f"✅ Comparison written to {out_path}")
    return table


def cmd_report(manifest_path: PathLike) -> Path:
    """
    Breakdown grouped by block type, one row per application, written next
    to the manifest.
    """
    root, _ = _estimate_manifest(manifest_path)
    breakdowns = [power_breakdown(report) for report in load_reports(manifest_path, "activity")]
    path = breakdown_to_csv(breakdowns, root / BREAKDOWN_BY_BLOCK_NAME)
    register_output(manifest_path, path)
    logger.info(f"✅ Breakdown of {len(breakdowns)} applications written to {path}")
    return path
