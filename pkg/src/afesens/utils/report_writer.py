"""CSV and text reports of sensitivity grids, power curves and power tables."""

import csv
import io
import logging
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .data_utils import DataUtils

if TYPE_CHECKING:
	from ..inference.attributable import AnalysisReport
	from ..inference.power import PowerPoint
	from ..simulation.harness import PowerRow

logger = logging.getLogger(__name__)

GRID_HEADER = (
	'gamma',
	'theta',
	'method',
	'p_value_afe0',
	'a_star',
	'afe_lower',
	'saturated',
	'boundary_flag',
)
POWER_CURVE_HEADER = ('gamma', 'theta', 'method', 'power', 'mc_stderr')
POWER_TABLE_HEADER = (
	'delta1',
	'delta2',
	'gamma',
	'theta',
	'method',
	'power',
	'reps',
	'seed',
)


class ReportWriter:
	"""Renders analysis results as CSV text or aligned tables.

	Numbers carry 6 significant digits; gamma and theta are written as
	plain floats (1.0, 1.21) so grid rows are easy to match.
	"""

	def __init__(self, digits: int = 6):
		"""Initialize writer.

		Args:
			digits: Significant digits of numeric CSV fields
		"""
		self.digits = digits

	def format_value(self, value: float | None) -> str:
		"""Number with the writer's significant digits; None becomes an empty field."""
		if value is None:
			return ''
		return DataUtils.format_number(value, self.digits)

	@staticmethod
	def _grid_value(value: float) -> str:
		return str(float(value))

	@staticmethod
	def _to_csv(header: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
		buffer = io.StringIO()
		writer = csv.DictWriter(buffer, fieldnames=list(header), lineterminator='\n')
		writer.writeheader()
		writer.writerows(rows)
		return buffer.getvalue()

	def grid_csv(self, reports: Sequence['AnalysisReport']) -> str:
		"""Sensitivity grid as CSV.

		Args:
			reports: Grid reports

		Returns:
			CSV text with GRID_HEADER columns
		"""
		rows = (
			{
				'gamma': self._grid_value(r.gamma),
				'theta': self._grid_value(r.theta),
				'method': r.method,
				'p_value_afe0': self.format_value(r.p_value),
				'a_star': r.a_star,
				'afe_lower': self.format_value(r.afe_lower),
				'saturated': str(r.saturated).lower(),
				'boundary_flag': r.boundary_flag or '',
			}
			for r in reports
		)
		return self._to_csv(GRID_HEADER, rows)

	def grid_table(self, reports: Sequence['AnalysisReport']) -> str:
		"""Human-readable grid with AFe bounds as percentages.

		Args:
			reports: Grid reports

		Returns:
			Aligned text table
		"""
		header = ['Gamma', 'Theta', 'Method', 'P(AFe=0)', 'a*', 'AFe >=', '']
		if any(r.a_max is not None for r in reports):
			header.insert(6, 'AFe <=')

		lines = []
		for r in reports:
			row = [
				f'{r.gamma:.2f}',
				f'{r.theta:.2f}',
				r.method,
				self.format_value(r.p_value),
				str(r.a_star),
				DataUtils.format_percent(r.afe_lower),
			]
			if len(header) == 8:
				upper = r.afe_upper
				row.append(DataUtils.format_percent(upper) if upper is not None else '')
			marks = [r.boundary_flag or '']
			if r.saturated:
				marks.append('saturated')
			row.append(' '.join(m for m in marks if m))
			lines.append(row)

		widths = [
			max(len(header[i]), *(len(row[i]) for row in lines)) if lines else len(header[i])
			for i in range(len(header))
		]
		rendered = [
			'  '.join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)).rstrip()
			for row in [header, *lines]
		]
		return '\n'.join(rendered) + '\n'

	def power_curve_csv(self, points: Sequence['PowerPoint']) -> str:
		"""Power curve as CSV; mc_stderr is empty for analytic values."""
		rows = (
			{
				'gamma': self._grid_value(p.gamma),
				'theta': self._grid_value(p.theta),
				'method': p.method,
				'power': self.format_value(p.power),
				'mc_stderr': self.format_value(p.mc_stderr),
			}
			for p in points
		)
		return self._to_csv(POWER_CURVE_HEADER, rows)

	def power_table_csv(self, rows: Sequence['PowerRow']) -> str:
		"""Simulated power table as CSV."""
		records = (
			{
				'delta1': self.format_value(r.delta1),
				'delta2': self.format_value(r.delta2),
				'gamma': self._grid_value(r.gamma),
				'theta': self._grid_value(r.theta),
				'method': r.method,
				'power': self.format_value(r.power),
				'reps': r.reps,
				'seed': r.seed,
			}
			for r in rows
		)
		return self._to_csv(POWER_TABLE_HEADER, records)

	@staticmethod
	def write(text: str, path: str | Path | None = None) -> None:
		"""Writes text to a file, or to standard output when path is None."""
		if path is None:
			sys.stdout.write(text)
			return
		Path(path).write_text(text, encoding='utf-8')
		logger.info(f'Wrote {len(text.splitlines())} lines to {path}')
