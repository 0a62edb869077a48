"""Configuration, experiment registry, sweeps and the command-line interface."""

from .config import RunConfig, load_config
from .experiments import REGISTRY, run_experiment
from .sweep import sweep

__all__ = ["REGISTRY", "RunConfig", "load_config", "run_experiment", "sweep"]
