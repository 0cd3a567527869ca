"""Experiment orchestration: configs, the record store, fits and emitted outputs."""
from .config import ExperimentConfig, load_config, parse_config
from .fit import FitResult, fit_exponent
from .store import ExperimentRecord, RecordStore
from .runner import run_experiment

__all__ = ["ExperimentConfig", "load_config", "parse_config", "FitResult", "fit_exponent",
           "ExperimentRecord", "RecordStore", "run_experiment"]
