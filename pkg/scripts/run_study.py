"""
===============================================================================
SCRIPT NAME: run_study.py
===============================================================================

PURPOSE:
    One-command study: estimate, compare, breakdown report and EE sweep of a
    scenario, in that order, with a summary of what succeeded.

USAGE:
    python scripts/run_study.py [OPTIONS]

OPTIONS:
    --scenario PATH: scenario JSON (default: data/scenarios/lte_miso_fft_sizes.json)
    --library PATH: power library JSON (default: data/synthetic_library.json)
    --reference PATH: reference wattages (default: data/reference/published_reference.json)
    --ee-params PATH: EE parameters (default: data/ee_params.json)
    --out DIR: output directory (default: out/study)
    --seed N: root seed
    --skip-ee: stop after the power reports

WHAT THIS SCRIPT DOES:
    1. actisim estimate
    2. actisim compare --reference (table printed and written as compare.csv)
    3. actisim report --breakdown
    4. actisim ee (unless --skip-ee)
    5. Outputs summary

RELATED FILES:
    - cli/main.py - the individual commands
===============================================================================
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from cli.main import EXIT_OK, EXIT_PARTIAL, main as actisim_main
from utils.config import DEFAULT_SEED
from utils.logging_config import setup_logger

logger = setup_logger(__name__)

DATA_DIR = Path(__file__).parent.parent / "data"


def run_step(title: str, argv: list) -> int:
    logger.info("\n" + "=" * 80)
    logger.info(title)
    logger.info("=" * 80)
    return actisim_main(argv)


def main() -> int:
    """Main entry point."""
    parser = argparse.ArgumentParser(
        description="Run the full power and energy-efficiency study of a scenario",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Bundled four-application study
  python scripts/run_study.py

  # Power reports only, custom scenario
  python scripts/run_study.py --scenario my_scenario.json --skip-ee
        """
    )
    parser.add_argument('--scenario', default=str(DATA_DIR / "scenarios" / "lte_miso_fft_sizes.json"))
    parser.add_argument('--library', default=str(DATA_DIR / "synthetic_library.json"))
    parser.add_argument('--reference', default=str(DATA_DIR / "reference" / "published_reference.json"))
    parser.add_argument('--ee-params', default=str(DATA_DIR / "ee_params.json"))
    parser.add_argument('--out', default="out/study")
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--skip-ee', action='store_true', help='Skip the energy-efficiency sweep')
    args = parser.parse_args()

    out = Path(args.out)
    manifest = str(out / "manifest.json")
    steps_completed = []
    steps_failed = []

    status = run_step("STEP 1: Simulating applications and estimating power...", [
        "estimate", "--scenario", args.scenario, "--library", args.library,
        "--out", str(out), "--seed", str(args.seed),
    ])
    if status == EXIT_OK:
        steps_completed.append("Estimate")
    elif status == EXIT_PARTIAL:
        steps_failed.append("Estimate (some applications failed)")
    else:
        logger.error("❌ Estimate failed. Fix the inputs and retry.")
        return status

    steps = [
        ("STEP 2: Comparing with the cumulative baseline...", "Compare",
         ["compare", "--manifest", manifest, "--reference", args.reference, "--out", str(out / "compare.csv")]),
        ("STEP 3: Writing the power breakdown...", "Breakdown report",
         ["report", "--manifest", manifest, "--breakdown"]),
    ]
    if not args.skip_ee:
        steps.append(("STEP 4: Energy-efficiency sweep...", "EE sweep",
                      ["ee", "--manifest", manifest, "--params", args.ee_params, "--out", str(out / "ee")]))

    for title, name, argv in steps:
        if run_step(title, argv) == EXIT_OK:
            steps_completed.append(name)
        else:
            steps_failed.append(name)

    logger.info("\n" + "=" * 80)
    logger.info("STUDY SUMMARY")
    logger.info("=" * 80)
    for step in steps_completed:
        logger.info(f"   ✅ {step}")
    for step in steps_failed:
        logger.info(f"   ❌ {step}")
    logger.info(f"   Results in {out}")
    return EXIT_OK if not steps_failed else EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
