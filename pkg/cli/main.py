"""
===============================================================================
MODULE: main.py
===============================================================================

PURPOSE:
    Command-line entry point: `actisim <command> [OPTIONS]`.

USAGE:
    python actisim.py estimate --scenario S.json --library L.json --out DIR [--seed N] [--jobs K]
    python actisim.py ee --manifest DIR/manifest.json --params EE.json --pt-dbm -10:50:1 --out DIR
    python actisim.py compare --manifest DIR/manifest.json [--reference R.json] [--out T.csv]
    python actisim.py report --manifest DIR/manifest.json --breakdown

EXIT CODES:
    0 - every application succeeded
    2 - some applications failed (see the manifest)
    1 - usage or configuration error (bad flags, unreadable input files)

ENVIRONMENT:
    ACTISIM_LOG - log level (DEBUG, INFO, WARNING, ERROR, CRITICAL), also
                  read from a .env file in the working directory
===============================================================================
"""

import argparse
import sys
from typing import List, Optional

from cli.commands import cmd_compare, cmd_ee, cmd_estimate, cmd_report
from utils.config import DEFAULT_SEED, get_runtime_config, load_environment
from utils.exceptions import ActisimError
from utils.logging_config import refresh_log_levels, setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actisim",
        description="Activity-based power estimation of FPGA baseband designs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Simulate the four IFFT-size applications and estimate their power
  python actisim.py estimate --scenario data/scenarios/lte_miso_fft_sizes.json \\
      --library data/synthetic_library.json --out out

  # Energy efficiency with and without circuit power
  python actisim.py ee --manifest out/manifest.json --params data/ee_params.json --out out/ee

  # Activity-weighted vs cumulative, with errors against reference wattages
  python actisim.py compare --manifest out/manifest.json \\
      --reference data/reference/published_reference.json
        """
    )
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="Simulate a scenario and estimate power")
    estimate.add_argument('--scenario', required=True, help='Scenario JSON file')
    estimate.add_argument('--library', required=True, help='Power library JSON file')
    estimate.add_argument('--out', required=True, help='Output directory')
    estimate.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Root seed (default: {DEFAULT_SEED})')
    estimate.add_argument(
        '--jobs',
        type=int,
        default=None,
        help=f"Parallel applications (default: number of applications, at most {get_runtime_config()['max_jobs']})"
    )
    estimate.add_argument('--dump-samples', action='store_true', help='Write per-antenna sample CSVs')

    ee = commands.add_parser("ee", help="Energy-efficiency sweep over transmit power")
    ee.add_argument('--manifest', required=True, help='manifest.json of an estimate run')
    ee.add_argument('--params', required=True, help='EE parameters JSON file')
    ee.add_argument('--pt-dbm', default=None, help='Transmit power sweep start:stop:step in dBm (default: -10:50:1)')
    ee.add_argument('--out', default=None, help='Output directory (default: next to the manifest)')
    ee.add_argument('--seed', type=int, default=None, help='Fading seed (default: the manifest seed)')

    compare = commands.add_parser("compare", help="Activity-weighted vs cumulative totals")
    compare.add_argument('--manifest', required=True, help='manifest.json of an estimate run')
    compare.add_argument('--reference', default=None, help='Reference wattages JSON file')
    compare.add_argument('--out', default=None, help='Also write the table as CSV')

    report = commands.add_parser("report", help="Power breakdown reports")
    report.add_argument('--manifest', required=True, help='manifest.json of an estimate run')
    report.add_argument('--breakdown', action='store_true', help='Write breakdown_by_block.csv')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one command.

    RETURNS:
        int: exit code (0 success, 2 partial failure, 1 usage/config error)
    """
    load_environment()
    refresh_log_levels()

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        if args.command == "estimate":
            if args.jobs is not None and args.jobs < 1:
                logger.error("❌ --jobs must be at least 1")
                return EXIT_USAGE
            manifest = cmd_estimate(args.scenario, args.library, args.out, seed=args.seed,
                                    jobs=args.jobs, dump_samples=args.dump_samples)
            return EXIT_PARTIAL if manifest.failed else EXIT_OK

        if args.command == "ee":
            cmd_ee(args.manifest, args.params, args.pt_dbm, args.out, args.seed)
            return EXIT_OK

        if args.command == "compare":
            table = cmd_compare(args.manifest, args.reference, args.out)
            print(table.to_string(index=False, float_format=lambda value: f"{value:.2f}"))
            return EXIT_OK

        if args.command == "report":
            if not args.breakdown:
                logger.error("❌ Nothing to report; pass --breakdown")
                logger.info("   💡 report --manifest DIR/manifest.json --breakdown")
                return EXIT_USAGE
            print(cmd_report(args.manifest))
            return EXIT_OK
    except ActisimError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
