"""Experiment harness: setup libraries, batch play, records and reports."""

from .common import AgentConfig, build_fingerprint, derive_seed, play_game
from .config import ExperimentConfig, GameSource, RunSettings, load_config
from .experiment import run_experiment
from .kmedoids import kmedoids
from .report import build_report
from .setups import SetupLibrary, build_setup_library

__all__ = [
    "AgentConfig",
    "ExperimentConfig",
    "GameSource",
    "RunSettings",
    "SetupLibrary",
    "build_fingerprint",
    "build_report",
    "build_setup_library",
    "derive_seed",
    "kmedoids",
    "load_config",
    "play_game",
    "run_experiment",
]
