"""
NoisyLab - Configuration Management

Handles persisted lab settings: noise grids, optimizer budgets, ADAPT and
randomized compiling defaults, logging preferences.
"""

from .settings import SettingsManager, LabSettings, get_settings_manager, default_jobs

__all__ = ['SettingsManager', 'LabSettings', 'get_settings_manager', 'default_jobs']
