#!/usr/bin/env python3
"""
NoisyLab - Settings Management

Manages default noise levels, optimizer budgets, ADAPT and randomized
compiling options, and logging preferences for the simulation suite.
"""

import json
import os
from pathlib import Path
from typing import Dict, Any, Optional, List
from dataclasses import dataclass, asdict, field, fields, replace

try:
    from ..operators.pauli import DENSE_QUBIT_LIMIT
    from ..utils.logger import get_logger, lab_home
except ImportError:
    from operators.pauli import DENSE_QUBIT_LIMIT
    from utils.logger import get_logger, lab_home


def _default_p1_grid() -> List[float]:
    return [0.0, 1e-4, 1e-3, 1e-2]


@dataclass
class LabSettings:
    """Application settings data class."""

    # Noise model
    p1_grid: List[float] = field(default_factory=_default_p1_grid)
    two_qubit_ratio: float = 10.0
    exempt_diagonal_gates: bool = True

    # Gradient-free optimizer (COBYLA)
    cobyla_max_iterations: int = 1000
    cobyla_tolerance: float = 1e-6
    cobyla_rhobeg: float = 0.5

    # Quasi-Newton optimizer (L-BFGS, central differences)
    lbfgs_max_iterations: int = 500000
    lbfgs_tolerance: float = 1e-4
    lbfgs_memory: int = 10
    fd_step: float = 1e-4

    # ADAPT-VQE
    adapt_grad_threshold: float = 1e-2
    adapt_max_depth: int = 20
    adapt_gradient_norm: str = "l2"  # l2, linf
    adapt_noiseless_gradients: bool = False

    # Randomized compiling
    rc_randomizations: int = 10

    # Execution
    jobs: int = 1
    dense_qubit_limit: int = 10

    # Logging settings
    log_level: str = "INFO"
    keep_logs_days: int = 30
    log_to_file: bool = False


class SettingsManager:
    """
    Manages lab settings with persistence and validation.

    Settings live in ``$NOISYLAB_HOME/config/settings.json`` with a backup
    copy written before every save.
    """

    def __init__(self, settings_dir: Optional[Path] = None):
        """Initialize settings manager."""
        self.logger = get_logger()
        self.settings_dir = Path(settings_dir) if settings_dir else lab_home() / "config"
        self.settings_file = self.settings_dir / "settings.json"
        self.backup_file = self.settings_dir / "settings_backup.json"

        self.settings = self.load_settings()

    def load_settings(self) -> LabSettings:
        """
        Load settings from file.

        Returns:
            LabSettings instance with loaded or default values
        """
        if not self.settings_file.exists():
            return LabSettings()

        try:
            return self.read_settings_file(self.settings_file)

        except (OSError, ValueError, TypeError) as e:
            self.logger.warning(f"Failed to load settings: {e}", "CONFIG")

            if self.backup_file.exists():
                try:
                    return self.read_settings_file(self.backup_file)
                except (OSError, ValueError, TypeError):
                    pass

            return LabSettings()

    def read_settings_file(self, path: Path) -> LabSettings:
        """
        Read and validate a settings JSON file without persisting it.

        Args:
            path: JSON file holding a subset of LabSettings keys

        Returns:
            Validated LabSettings; unknown keys are ignored with a warning
        """
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)

        known = {f.name for f in fields(LabSettings)}
        unknown = sorted(set(data) - known)
        if unknown:
            self.logger.warning(f"Ignoring unknown setting keys in {path}: {', '.join(unknown)}", "CONFIG")

        settings = LabSettings(**{k: v for k, v in data.items() if k in known})
        return self._validate_settings(settings)

    def save_settings(self, settings: LabSettings) -> bool:
        """
        Save settings to file.

        Args:
            settings: LabSettings instance to save

        Returns:
            True if successful, False otherwise
        """
        try:
            self.settings_dir.mkdir(parents=True, exist_ok=True)
            if self.settings_file.exists():
                if self.backup_file.exists():
                    self.backup_file.unlink()
                self.settings_file.rename(self.backup_file)

            with open(self.settings_file, 'w', encoding='utf-8') as f:
                json.dump(asdict(settings), f, indent=2, ensure_ascii=False)

            self.settings = settings
            return True

        except OSError as e:
            self.logger.error(f"Failed to save settings: {e}", "CONFIG")

            if self.backup_file.exists() and not self.settings_file.exists():
                try:
                    self.backup_file.rename(self.settings_file)
                except OSError:
                    pass

            return False

    def get_setting(self, key: str, default: Any = None) -> Any:
        """Get a specific setting value."""
        return getattr(self.settings, key, default)

    def set_setting(self, key: str, value: Any) -> bool:
        """
        Set a specific setting value and persist it.

        Args:
            key: Setting key
            value: New value

        Returns:
            True if successful, False otherwise
        """
        if not hasattr(self.settings, key):
            self.logger.warning(f"Unknown setting key: {key}", "CONFIG")
            return False
        try:
            candidate = self._validate_settings(replace(self.settings, **{key: value}))
        except (TypeError, ValueError) as e:
            self.logger.warning(f"Invalid value for {key}: {value!r} ({e})", "CONFIG")
            return False
        return self.save_settings(candidate)

    def reset_to_defaults(self) -> bool:
        """Reset all settings to default values."""
        return self.save_settings(LabSettings())

    def export_settings(self, export_path: str) -> bool:
        """Export settings to a file."""
        try:
            with open(export_path, 'w', encoding='utf-8') as f:
                json.dump(asdict(self.settings), f, indent=2, ensure_ascii=False)
            return True

        except OSError as e:
            self.logger.error(f"Failed to export settings: {e}", "CONFIG")
            return False

    def import_settings(self, import_path: str) -> bool:
        """Import settings from a file and persist them."""
        try:
            settings = self.read_settings_file(Path(import_path))
        except (OSError, ValueError, TypeError) as e:
            self.logger.error(f"Failed to import settings: {e}", "CONFIG")
            return False
        return self.save_settings(settings)

    def _validate_settings(self, settings: LabSettings) -> LabSettings:
        """
        Validate and fix settings values.

        Args:
            settings: Settings to validate

        Returns:
            Validated settings
        """
        defaults = LabSettings()

        # p2 = ratio * p1 must stay a probability
        if not isinstance(settings.p1_grid, list) or not settings.p1_grid:
            settings.p1_grid = defaults.p1_grid
        else:
            ceiling = 1.0 / max(settings.two_qubit_ratio, 1.0)
            settings.p1_grid = [float(p) for p in settings.p1_grid if 0.0 <= float(p) <= ceiling] or defaults.p1_grid

        if settings.two_qubit_ratio < 1.0:
            settings.two_qubit_ratio = defaults.two_qubit_ratio

        for name in ('cobyla_max_iterations', 'lbfgs_max_iterations', 'lbfgs_memory',
                     'adapt_max_depth', 'rc_randomizations', 'jobs', 'keep_logs_days'):
            if int(getattr(settings, name)) < 1:
                setattr(settings, name, getattr(defaults, name))

        for name in ('cobyla_tolerance', 'cobyla_rhobeg', 'lbfgs_tolerance', 'fd_step', 'adapt_grad_threshold'):
            if float(getattr(settings, name)) <= 0.0:
                setattr(settings, name, getattr(defaults, name))

        if settings.adapt_gradient_norm not in ('l2', 'linf'):
            settings.adapt_gradient_norm = defaults.adapt_gradient_norm

        if not 1 <= int(settings.dense_qubit_limit) <= DENSE_QUBIT_LIMIT:
            settings.dense_qubit_limit = defaults.dense_qubit_limit

        valid_log_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if str(settings.log_level).upper() not in valid_log_levels:
            settings.log_level = defaults.log_level

        return settings

    def get_settings_summary(self) -> Dict[str, Any]:
        """Get a summary of current settings."""
        return {
            "p1_grid": self.settings.p1_grid,
            "two_qubit_ratio": self.settings.two_qubit_ratio,
            "exempt_diagonal_gates": self.settings.exempt_diagonal_gates,
            "adapt_grad_threshold": self.settings.adapt_grad_threshold,
            "rc_randomizations": self.settings.rc_randomizations,
            "jobs": default_jobs(self.settings),
            "settings_file": str(self.settings_file),
        }


def default_jobs(settings: Optional[LabSettings] = None) -> int:
    """Job count from NOISYLAB_JOBS, falling back to settings."""
    env_value = os.environ.get('NOISYLAB_JOBS')
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            get_logger().warning(f"Ignoring non-integer NOISYLAB_JOBS={env_value!r}", "CONFIG")
    return (settings or get_settings_manager().settings).jobs


# Global settings manager instance
_settings_manager: Optional[SettingsManager] = None

def get_settings_manager() -> SettingsManager:
    """Get or create the global settings manager instance."""
    global _settings_manager

    if _settings_manager is None:
        _settings_manager = SettingsManager()

    return _settings_manager
