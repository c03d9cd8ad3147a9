"""Sensitivity analysis for the attributable fraction among exposed cases.

Library for matched case-referent studies: bounds on the attributable
effect under hidden bias (Gamma) and selection bias (Theta), combination of
subtype-specific tests, power, design sensitivity and simulation.
"""

import logging

from .client import AFeSensClient
from .core.pair_counts import PairCounts
from .core.study import Study
from .errors import (
	AFeSensError,
	ConfigError,
	DomainError,
	StudyParseError,
	StudyValidationError,
)
from .inference.attributable import AnalysisReport, sensitivity_grid
from .inference.bounds import SensParams
from .parsers.csv_parser import StudyCSVParser, SummaryCSVParser
from .simulation.config import DGPConfig, PairedDGPConfig

# Configure logging
logging.basicConfig(
	level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

__version__ = '0.1.0'
__all__ = [
	'AFeSensClient',
	'Study',
	'PairCounts',
	'SensParams',
	'AnalysisReport',
	'sensitivity_grid',
	'StudyCSVParser',
	'SummaryCSVParser',
	'DGPConfig',
	'PairedDGPConfig',
	'AFeSensError',
	'StudyValidationError',
	'StudyParseError',
	'DomainError',
	'ConfigError',
	'logger',
]
