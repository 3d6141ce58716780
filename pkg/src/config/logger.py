import sys
from datetime import datetime
from pathlib import Path

from loguru import logger

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> |"
    "<cyan>{file}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {file}:{function}:{line} - {message}"

# Library default: warnings and above on stderr; the CLI reconfigures via setup_logging.
logger.remove()
logger.add(sys.stderr, format=CONSOLE_FORMAT, level="WARNING")


def setup_logging(level: str = "INFO", log_dir: str | Path | None = None) -> None:
    """Route log records to stderr and, optionally, to dated files.

    Args:
        level: Minimum level for the console sink.
        log_dir: Base directory for file sinks; a ``YYYY-MM-DD`` sub-directory is created
            holding ``app_<date>.log`` and an ERROR-only ``error_<date>.log``.
    """
    logger.remove()
    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level.upper())

    if log_dir is None:
        return

    current_date = datetime.now().strftime("%Y-%m-%d")
    dated_dir = Path(log_dir) / current_date
    dated_dir.mkdir(parents=True, exist_ok=True)

    logger.add(
        str(dated_dir / f"app_{current_date}.log"),
        format=FILE_FORMAT,
        level=level.upper(),
    )
    logger.add(
        str(dated_dir / f"error_{current_date}.log"),
        format=FILE_FORMAT,
        level="ERROR",
    )


def get_logger(service: str):
    """Logger bound to a service name."""
    return logger.bind(service=service)


def log_structured(event_type: str, data: dict):
    """One INFO record carrying an event type and its payload."""
    logger.info({"event_type": event_type, "data": data})
