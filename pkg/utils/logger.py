"""
Centralized logging for the staircase toolkit.

This module provides a single logger instance shared by the core, the
services and the command line. The logger writes to a timestamped file in
the log directory (STAIRCASE_LOG_DIR, default logs/) and to stderr, so
command results on stdout stay clean.
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Tuple

from pydantic import ValidationError

from config.settings import load_settings


class ProjectLogger:
    """
    Singleton logger for the entire project.

    This class ensures only one logger instance exists and provides
    consistent logging configuration across all modules.
    """

    _instance: Optional['ProjectLogger'] = None
    _logger: Optional[logging.Logger] = None

    def __new__(cls) -> 'ProjectLogger':
        """Ensure singleton pattern."""
        if cls._instance is None:
            cls._instance = super(ProjectLogger, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        """Initialize logger if not already done."""
        if self._logger is None:
            self._setup_logger()

    @staticmethod
    def _logging_settings() -> Tuple[Path, str]:
        """Log directory and console level from Settings, defaults if the environment is invalid."""
        try:
            settings = load_settings()
        except ValidationError:
            # main() reports the invalid environment when it reads the settings
            return Path('logs'), 'INFO'
        return Path(settings.log_dir), settings.log_level

    def _setup_logger(self) -> None:
        """Set up the project logger with file and stderr handlers."""
        logs_dir, log_level = self._logging_settings()
        logs_dir.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_path = logs_dir / f"staircase_{timestamp}.log"

        self._logger = logging.getLogger("hirzebruch_staircases")
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False
        self._logger.handlers.clear()

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, log_level))
        console_handler.setFormatter(formatter)
        self._logger.addHandler(console_handler)

        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        self._logger.addHandler(file_handler)

        self._logger.debug(f"Logger initialized. Log file: {log_path}")

    @property
    def log_path(self) -> Optional[Path]:
        """Path of the current log file."""
        for handler in self._logger.handlers:
            if isinstance(handler, logging.FileHandler):
                return Path(handler.baseFilename)
        return None

    @property
    def logger(self) -> logging.Logger:
        """Get the logger instance."""
        return self._logger

    def set_level(self, level: str) -> None:
        """Set the console logging level."""
        if hasattr(logging, level.upper()):
            log_level = getattr(logging, level.upper())
            for handler in self._logger.handlers:
                if not isinstance(handler, logging.FileHandler):
                    handler.setLevel(log_level)


# Global logger instance
_project_logger = ProjectLogger()
logger = _project_logger.logger


def get_logger() -> logging.Logger:
    """
    Get the global project logger.

    Returns:
        logging.Logger: The configured logger instance
    """
    return logger


def set_log_level(level: str) -> None:
    """
    Set the global console logging level.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    _project_logger.set_level(level)


def get_log_path() -> Optional[Path]:
    """Path of the timestamped log file."""
    return _project_logger.log_path
