#!/usr/bin/env python3
"""
NoisyLab - Logging System

Provides logging for the NoisyLab simulation suite with category tags,
optional file output and coloured console level names.

Console output goes to stderr so that command output on stdout (CSV rows,
spectra, circuit dumps) stays machine readable.
"""

import os
import sys
import logging
from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional, Dict, Any, Sequence
import json

try:
    import colorama
    from colorama import Fore, Style
except ImportError:  # pragma: no cover - colour is cosmetic
    colorama = None
    Fore = Style = None


LEVEL_COLOURS = {
    'DEBUG': 'CYAN',
    'INFO': 'GREEN',
    'WARNING': 'YELLOW',
    'ERROR': 'RED',
    'CRITICAL': 'MAGENTA',
}


def lab_home() -> Path:
    """Directory holding logs and persisted settings."""
    return Path(os.environ.get('NOISYLAB_HOME', Path.home() / '.noisylab'))


class _ColourFormatter(logging.Formatter):
    """Formatter that colours the level name on terminals."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        if Fore is None:
            return text
        colour = getattr(Fore, LEVEL_COLOURS.get(record.levelname, 'WHITE'))
        return text.replace(record.levelname, f"{colour}{record.levelname}{Style.RESET_ALL}", 1)


class NoisyLabLogger:
    """Category-tagged logger for simulation, optimization and sweep activity."""

    def __init__(self, log_level: str = "INFO", log_to_file: bool = False, log_to_console: bool = True):
        """Initialize the logger with specified configuration."""
        self.log_level = log_level.upper()
        self.log_to_file = log_to_file
        self.log_to_console = log_to_console

        self.log_dir = lab_home() / "logs"
        self.main_log_file = self.log_dir / "noisylab.log"
        self.session_log_file = self.log_dir / f"session_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"

        self._setup_logging()

    def _setup_logging(self):
        """Setup logging configuration."""
        self.logger = logging.getLogger('noisylab')
        self.logger.setLevel(getattr(logging, self.log_level))
        self.logger.propagate = False
        self.logger.handlers.clear()

        pattern = '%(asctime)s | %(levelname)-8s | [%(name)s] %(message)s'
        datefmt = '%H:%M:%S'

        if self.log_to_console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(getattr(logging, self.log_level))
            if colorama is not None and sys.stderr.isatty():
                colorama.just_fix_windows_console()
                console_handler.setFormatter(_ColourFormatter(pattern, datefmt=datefmt))
            else:
                console_handler.setFormatter(logging.Formatter(pattern, datefmt=datefmt))
            self.logger.addHandler(console_handler)

        if self.log_to_file:
            try:
                self.log_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                self.log_to_file = False
                self.logger.warning(f"[LOG] File logging disabled, cannot create {self.log_dir}: {e}")
                return

            formatter = logging.Formatter(pattern, datefmt=datefmt)
            file_handler = logging.FileHandler(self.main_log_file, mode='a', encoding='utf-8')
            file_handler.setLevel(getattr(logging, self.log_level))
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

            session_handler = logging.FileHandler(self.session_log_file, mode='w', encoding='utf-8')
            session_handler.setLevel(getattr(logging, self.log_level))
            session_handler.setFormatter(formatter)
            self.logger.addHandler(session_handler)

    def debug(self, message: str, category: str = "DEBUG"):
        """Log debug message."""
        self.logger.debug(f"[{category}] {message}")

    def info(self, message: str, category: str = "INFO"):
        """Log info message."""
        self.logger.info(f"[{category}] {message}")

    def warning(self, message: str, category: str = "WARN"):
        """Log warning message."""
        self.logger.warning(f"[{category}] {message}")

    def error(self, message: str, category: str = "ERROR", exception: Exception = None):
        """Log error message with optional exception details."""
        self.logger.error(f"[{category}] {message}")
        if exception:
            self.logger.error(f"[{category}] Exception details: {type(exception).__name__}: {str(exception)}")

    def log_optimizer_result(self, optimizer: str, energy: float, evaluations: int, converged: bool,
                             parameters: Sequence[float]):
        """Log the outcome of one optimization."""
        params = ", ".join(f"{p:.6f}" for p in parameters)
        status = "CONVERGED" if converged else "NOT CONVERGED"
        self.info(f"Optimizer: {optimizer} | Energy: {energy:.10f} Ha | Evaluations: {evaluations} | "
                  f"Status: {status} | Parameters: [{params}]", "OPT")

    def log_adapt_iteration(self, iteration: int, selected: str, gradient_norm: float, energy: float,
                            n_params: int):
        """Log one ADAPT growth step."""
        self.info(f"Iteration: {iteration} | Selected: {selected} | |g|: {gradient_norm:.3e} | "
                  f"Energy: {energy:.10f} Ha | Parameters: {n_params}", "ADAPT")

    def log_performance(self, operation: str, duration_ms: float, details: Dict[str, Any] = None):
        """Log performance metrics."""
        message = f"Operation: {operation} | Duration: {duration_ms:.2f}ms"
        if details:
            message += f" | Details: {json.dumps(details, default=str)}"
        self.info(message, "PERF")

    def log_error_with_context(self, error: Exception, context: Dict[str, Any]):
        """Log error with detailed context information."""
        self.error(f"Error occurred: {type(error).__name__}: {str(error)}", "ERROR")
        self.error(f"Context: {json.dumps(context, default=str, indent=2)}", "ERROR")

    def cleanup_old_logs(self, days_to_keep: int = 30):
        """Clean up old session log files."""
        if not self.log_dir.exists():
            return
        try:
            cutoff_date = datetime.now() - timedelta(days=days_to_keep)
            removed_count = 0

            for log_file in self.log_dir.glob("session_*.log"):
                if log_file.stat().st_mtime < cutoff_date.timestamp():
                    log_file.unlink()
                    removed_count += 1

            if removed_count > 0:
                self.info(f"Cleaned up {removed_count} old log files", "CLEANUP")

        except OSError as e:
            self.error(f"Failed to cleanup old logs: {e}", "CLEANUP")


# Global logger instance
_logger_instance: Optional[NoisyLabLogger] = None

def get_logger(log_level: str = "INFO", log_to_file: bool = False, log_to_console: bool = True) -> NoisyLabLogger:
    """Get or create the global logger instance."""
    global _logger_instance

    if _logger_instance is None:
        _logger_instance = NoisyLabLogger(
            log_level=log_level,
            log_to_file=log_to_file,
            log_to_console=log_to_console
        )

    return _logger_instance

def configure_logger(log_level: str = "INFO", log_to_file: bool = False) -> NoisyLabLogger:
    """Reconfigure the global logger, e.g. from CLI flags or settings."""
    logger = get_logger()
    logger.log_level = log_level.upper()
    logger.log_to_file = log_to_file
    logger._setup_logging()
    return logger
