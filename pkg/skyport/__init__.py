# File: skyport/__init__.py

import logging

__version__ = "1.0.0"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "INFO") -> logging.Logger:
    """
    Install a single stream handler on the package logger.
    Calling it again replaces that handler, so it follows the current sys.stderr.
    """
    logger = logging.getLogger("skyport")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logger.setLevel(level)

    for old in [h for h in logger.handlers if getattr(h, "_skyport", False)]:
        logger.removeHandler(old)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._skyport = True
    logger.addHandler(handler)
    return logger
