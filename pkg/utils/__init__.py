# Package marker - shared helpers (logging, configuration, exceptions)
# This allows imports like: from utils.logging_config import setup_logger
