"""
actisim - activity-based power estimation of FPGA wireless baseband designs.

    python actisim.py estimate --scenario data/scenarios/lte_miso_fft_sizes.json \
        --library data/synthetic_library.json --out out

See cli/main.py for every command and option.
"""

import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
