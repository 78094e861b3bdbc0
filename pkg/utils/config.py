"""
===============================================================================
MODULE: config.py
===============================================================================

PURPOSE:
    Runtime configuration for the simulator. Almost everything is passed as
    files and flags; this module only gathers the few process-wide values.

USAGE EXAMPLES:
    from utils.config import get_runtime_config

    config = get_runtime_config()
    jobs = min(n_apps, config['max_jobs'])

WHAT THIS MODULE DOES:
    1. Loads .env (python-dotenv) once
    2. Reads ACTISIM_LOG
    3. Provides defaults for parallel jobs and the transmit power sweep

RELATED FILES:
    - utils/logging_config.py - uses ACTISIM_LOG
    - cli/main.py - reads this configuration
===============================================================================
"""

import os
from typing import Dict, Any

from dotenv import find_dotenv, load_dotenv

from utils.logging_config import setup_logger, LOG_LEVEL_ENV_VAR

logger = setup_logger(__name__)

# Upper bound on worker threads when --jobs is not given
DEFAULT_MAX_JOBS = 8

# Transmit power sweep used by `actisim ee` when --pt-dbm is omitted
DEFAULT_PT_DBM_RANGE = "-10:50:1"

DEFAULT_SEED = 2016


def load_environment() -> bool:
    """
    Load a .env file from the working directory, if present.

    RETURNS:
        bool: True if a .env file was found and loaded
    """
    path = find_dotenv(usecwd=True)
    if not path:
        return False
    loaded = load_dotenv(path, override=False)
    if loaded:
        logger.debug("Loaded .env file")
    return loaded


def get_runtime_config() -> Dict[str, Any]:
    """
    Get runtime configuration.

    RETURNS:
        Dict[str, Any]: log level name, job cap, default sweep and seed
    """
    return {
        'log_level': os.getenv(LOG_LEVEL_ENV_VAR, 'INFO').upper(),
        'max_jobs': min(DEFAULT_MAX_JOBS, os.cpu_count() or 1),
        'pt_dbm_range': DEFAULT_PT_DBM_RANGE,
        'seed': DEFAULT_SEED,
    }
