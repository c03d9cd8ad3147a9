"""Simulated case-referent studies and Monte Carlo power."""

from .config import DGPConfig, GroupDGP, PairedDGPConfig, load_config
from .harness import PowerRow, generate_dataset, generate_pairs, run_power_study

__all__ = [
	'DGPConfig',
	'GroupDGP',
	'PairedDGPConfig',
	'PowerRow',
	'load_config',
	'generate_dataset',
	'generate_pairs',
	'run_power_study',
]
