"""
===============================================================================
MODULE: logging_config.py
===============================================================================

PURPOSE:
    Provides centralized logging configuration for the whole simulator.
    Every package (power library, kernel, baseband blocks, estimator,
    EE analyzer, CLI) obtains its logger here so that all output shares one
    format and one verbosity switch.

WHEN TO USE THIS MODULE:
    - Import at the start of any module that needs logging
    - Use instead of creating loggers manually

USAGE EXAMPLES:
    from utils.logging_config import setup_logger

    logger = setup_logger(__name__)
    logger.info("✅ Library loaded")

    # Verbose run from the shell
    ACTISIM_LOG=DEBUG python actisim.py estimate --scenario ...

WHAT THIS MODULE DOES:
    1. Creates logger instances with consistent formatting
    2. Reads the level from ACTISIM_LOG (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    3. Sends console output to stderr (stdout is kept for command tables)
    4. Provides optional file logging under logs/

TROUBLESHOOTING:
    - "Logs not appearing": check ACTISIM_LOG, default level is INFO
    - "Too many logs": ACTISIM_LOG=WARNING

RELATED FILES:
    - utils/config.py - runtime configuration (reads the same variable)
    - cli/main.py - loads .env before the first logger is used
===============================================================================
"""

# ============================================================================
# STANDARD LIBRARY IMPORTS
# ============================================================================
import logging
import os
import sys
from pathlib import Path
from typing import Optional

# ============================================================================
# CONSTANTS AND CONFIGURATION
# ============================================================================

# Default log format - includes timestamp, logger name, level, and message
DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

DEFAULT_LOG_LEVEL = logging.INFO

# Environment variable controlling verbosity
LOG_LEVEL_ENV_VAR = 'ACTISIM_LOG'

# Log file directory (created only when file logging is requested)
LOG_DIR = Path("logs")

LOG_LEVEL_MAP = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL
}


def get_log_level_from_env() -> int:
    """
    Get log level from the ACTISIM_LOG environment variable.

    RETURNS:
        int: Logging level constant (e.g., logging.INFO). Unknown or empty
            values fall back to DEFAULT_LOG_LEVEL.

    EXAMPLE:
        >>> os.environ['ACTISIM_LOG'] = 'debug'
        >>> get_log_level_from_env() == logging.DEBUG
        True
    """
    env_log_level = os.getenv(LOG_LEVEL_ENV_VAR, '').strip().upper()
    return LOG_LEVEL_MAP.get(env_log_level, DEFAULT_LOG_LEVEL)


def setup_logger(
    name: str,
    log_level: Optional[int] = None,
    log_to_file: bool = False,
    log_file: Optional[str] = None
) -> logging.Logger:
    """
    Create and configure a logger instance.

    WHAT HAPPENS WHEN YOU CALL THIS:
        1. Creates logger instance with given name
        2. Sets log level from parameter or ACTISIM_LOG
        3. Configures a stderr console handler with the shared format
        4. Optionally configures a file handler under logs/
        5. Returns configured logger ready to use

    ARGUMENTS:
        name (str): Logger name (usually __name__ of calling module)
        log_level (Optional[int]): Explicit level, overrides ACTISIM_LOG
        log_to_file (bool): Also append to a log file
        log_file (Optional[str]): Custom log file name inside logs/

    RETURNS:
        logging.Logger: Configured logger instance

    RAISES:
        ValueError: If name is empty
    """
    if not name or not isinstance(name, str):
        raise ValueError("Logger name must be a non-empty string")

    if log_level is None:
        log_level = get_log_level_from_env()

    logger = logging.getLogger(name)

    # Avoid duplicate handlers if logger already configured
    if logger.handlers:
        logger.setLevel(log_level)
        for handler in logger.handlers:
            handler.setLevel(log_level)
        return logger

    logger.setLevel(log_level)
    logger.propagate = False

    formatter = logging.Formatter(
        fmt=DEFAULT_LOG_FORMAT,
        datefmt=DEFAULT_DATE_FORMAT
    )

    # ========================================================================
    # CONSOLE HANDLER (Always added)
    # ========================================================================
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # ========================================================================
    # FILE HANDLER (Optional)
    # ========================================================================
    if log_to_file:
        if log_file is None:
            safe_name = name.replace('.', '_').replace('/', '_')
            log_path = LOG_DIR / f"{safe_name}.log"
        else:
            log_path = LOG_DIR / log_file

        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path, mode='a', encoding='utf-8')
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        logger.info(f"📝 Logging to file: {log_path}")

    return logger


def refresh_log_levels() -> int:
    """
    Re-apply ACTISIM_LOG to every logger created through setup_logger.

    Loggers are created at import time, before the CLI has loaded a .env
    file; the CLI calls this once after load_dotenv().

    RETURNS:
        int: The level that was applied
    """
    level = get_log_level_from_env()
    for logger in logging.Logger.manager.loggerDict.values():
        if isinstance(logger, logging.Logger) and logger.handlers and not logger.propagate:
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)
    return level
