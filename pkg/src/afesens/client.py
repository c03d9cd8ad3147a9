"""Main client for sensitivity analysis of matched case-referent studies."""

import logging
from collections.abc import Sequence
from pathlib import Path

from .core.pair_counts import PairCounts
from .core.study import DEFAULT_LABEL, Study
from .errors import StudyParseError
from .inference.attributable import AnalysisReport, StudyData, sensitivity_grid
from .inference.combiners import MERGED
from .inference.power import (
	DesignSensitivityEstimate,
	PowerPoint,
	estimate_design_sensitivity,
	power_curve,
)
from .parsers.base_parser import BaseParser
from .parsers.csv_parser import StudyCSVParser
from .parsers.xlsx_parser import XLSXParser
from .simulation.config import DGPConfig, PairedDGPConfig
from .simulation.harness import PowerRow, run_power_study

logger = logging.getLogger(__name__)

OVERALL_LABEL = 'overall'


class AFeSensClient:
	"""Main client for loading case-referent data and running analyses.

	Provides a convenient interface over the parsers, the attributable-effect
	inference and the simulation harness.
	"""

	def __init__(
		self,
		subtype_labels: list[str] | None = None,
		alpha: float = 0.05,
		trunc: float = 0.10,
		exact: bool = False,
		workers: int | None = None,
	):
		"""Initialize client.

		Args:
			subtype_labels: Declared subtype labels (if None, taken from the data)
			alpha: Test level of every analysis
			trunc: Truncation point of the truncated product
			exact: Use the exact Poisson-binomial tail instead of the normal one
			workers: Worker count (if None, from AFESENS_THREADS)
		"""
		self.subtype_labels = subtype_labels
		self.alpha = alpha
		self.trunc = trunc
		self.exact = exact
		self.workers = workers
		self.csv_parser = StudyCSVParser(subtype_labels=subtype_labels)
		self.xlsx_parser = XLSXParser(subtype_labels=subtype_labels)

	def _parser_for(self, path: Path, worksheet_name: str | None = None) -> BaseParser:
		suffix = path.suffix.lower()
		if suffix in ('.xlsx', '.xlsm'):
			if worksheet_name:
				return XLSXParser(worksheet_name, self.subtype_labels)
			return self.xlsx_parser
		if suffix in ('.csv', '.tsv', '.txt', ''):
			return self.csv_parser
		logger.error(f'Unsupported file type {suffix!r}')
		raise StudyParseError(f'unsupported file type {suffix!r}; expected .csv or .xlsx')

	def load_study(self, path: str | Path, worksheet_name: str | None = None) -> Study:
		"""Loads a study from a long-format or summary-format file.

		Args:
			path: Path of a .csv or .xlsx file
			worksheet_name: Worksheet of an .xlsx file (if None, the active one)

		Returns:
			Study object

		Raises:
			FileNotFoundError: If the file does not exist
			StudyValidationError: If the data is malformed
		"""
		path = Path(path)
		parser = self._parser_for(path, worksheet_name)
		if isinstance(parser, StudyCSVParser):
			data = path.read_bytes()
			parser = StudyCSVParser(
				delimiter=parser.detect_delimiter(data), subtype_labels=self.subtype_labels
			)
			return parser.parse(data)
		return parser.parse(path.read_bytes())

	def load_summary(self, path: str | Path) -> dict[str, PairCounts]:
		"""Loads the 2 x 2 tables of a summary-format file.

		An unlabeled single table is returned under the default label.

		Args:
			path: Path of a .csv or .xlsx file

		Returns:
			Dictionary {subtype label: PairCounts}
		"""
		path = Path(path)
		tables = self._parser_for(path).parse_summary(path.read_bytes())
		return {DEFAULT_LABEL if label is None else label: t for label, t in tables.items()}

	def load_from_csv_string(self, csv_string: str) -> Study:
		"""Loads a study from a CSV string.

		Args:
			csv_string: CSV string in either layout

		Returns:
			Study object
		"""
		detected_delimiter = self.csv_parser.detect_delimiter(csv_string.encode('utf-8'))
		parser = StudyCSVParser(
			delimiter=detected_delimiter, subtype_labels=self.subtype_labels
		)
		return parser.parse_from_string(csv_string)

	def load_from_bytes(self, data: bytes, format_type: str = 'csv') -> Study:
		"""Loads a study from raw file contents.

		Args:
			data: File contents
			format_type: "csv" or "xlsx"

		Returns:
			Study object
		"""
		if format_type == 'xlsx':
			return self.xlsx_parser.parse(data)
		if format_type == 'csv':
			return self.csv_parser.parse(data)
		raise StudyParseError(f'unsupported format {format_type!r}')

	def summarize(self, data: Study | dict[str, PairCounts]) -> dict[str, PairCounts]:
		"""Pair tables per subtype plus the merged table.

		Args:
			data: Study of 1:1 pairs or {subtype: table}

		Returns:
			Dictionary {label: PairCounts} ending with the "overall" entry
		"""
		if isinstance(data, Study) and data.is_labeled:
			tables = {label: data.summarize_pairs(label) for label in data.subtype_labels}
		elif isinstance(data, Study):
			tables = {DEFAULT_LABEL: data.summarize_pairs()}
		else:
			tables = dict(data)

		merged = PairCounts(a=0, b=0, c=0, d=0)
		for table in tables.values():
			merged = merged + table
		if len(tables) > 1:
			tables[OVERALL_LABEL] = merged
		else:
			tables = {OVERALL_LABEL: merged}
		return tables

	def analyze(
		self,
		data: StudyData,
		gammas: Sequence[float],
		thetas: Sequence[float] = (1.0,),
		methods: Sequence[str] = (MERGED,),
		include_max: bool = False,
	) -> list[AnalysisReport]:
		"""Minimum confidence intervals for AFe over a (Gamma, Theta) grid.

		Args:
			data: Study, one 2 x 2 table or {subtype: table}
			gammas: Gamma grid
			thetas: Theta grid
			methods: Analysis methods
			include_max: Also compute the maximum attributable effect

		Returns:
			Reports sorted by Gamma, Theta and method
		"""
		reports = sensitivity_grid(
			data,
			gammas,
			thetas,
			methods,
			alpha=self.alpha,
			trunc=self.trunc,
			exact=self.exact,
			include_max=include_max,
			workers=self.workers,
		)
		rejected = sum(r.rejects for r in reports)
		logger.info(f'Analysis done: {rejected}/{len(reports)} cells reject AFe = 0')
		return reports

	def power(
		self,
		data: StudyData,
		gammas: Sequence[float],
		thetas: Sequence[float] = (1.0,),
		a_star: int | Sequence[int] = 0,
		methods: Sequence[str] = (MERGED,),
		reps: int = 0,
		seed: int = 0,
	) -> list[PowerPoint]:
		"""Power of the sensitivity analysis over a (Gamma, Theta) grid.

		Args:
			data: Study, one 2 x 2 table or {subtype: table}
			gammas: Gamma grid
			thetas: Theta grid
			a_star: Attributable effect, total or per subtype
			methods: merged, stouffer or weighted_stouffer
			reps: Monte Carlo replicates (0 for analytic power)
			seed: Master seed

		Returns:
			Power points
		"""
		return power_curve(
			data, gammas, thetas, a_star, methods, self.alpha, reps, seed, self.workers
		)

	def simulate(self, config: DGPConfig) -> list[PowerRow]:
		"""Runs the Monte Carlo power study of a simulation config."""
		return run_power_study(config, workers=self.workers)

	def design_sensitivity(
		self,
		generator: PairedDGPConfig,
		theta: float = 1.0,
		method: str = MERGED,
		n_sets: int = 10_000,
		reps: int = 100,
		tol: float = 0.02,
		gamma_range: tuple[float, float] = (1.0, 10.0),
		seed: int = 0,
	) -> DesignSensitivityEstimate:
		"""Monte Carlo design sensitivity of a paired generator.

		Args:
			generator: Paired data generator
			theta: Selection-bias parameter
			method: Analysis method
			n_sets: Pairs per simulated study
			reps: Simulated studies
			tol: Width of the final bisection bracket
			gamma_range: Search interval for Gamma
			seed: Master seed

		Returns:
			DesignSensitivityEstimate
		"""
		return estimate_design_sensitivity(
			generator,
			theta=theta,
			method=method,
			alpha=self.alpha,
			n_sets=n_sets,
			reps=reps,
			tol=tol,
			gamma_range=gamma_range,
			trunc=self.trunc,
			seed=seed,
			workers=self.workers,
		)
