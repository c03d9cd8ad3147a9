"""PairCounts class for the 2 x 2 summary of a pair-matched case-referent study."""

import logging
import math
from dataclasses import dataclass

from scipy.stats import binom, norm

from ..errors import StudyValidationError, UndefinedEstimateError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OddsRatio:
	"""Matched-pair odds ratio with a log-scale confidence interval.

	Attributes:
		estimate: Point estimate b / c
		lower: Lower interval endpoint
		upper: Upper interval endpoint
		level: Confidence level of the interval
	"""

	estimate: float
	lower: float
	upper: float
	level: float = 0.95


@dataclass(frozen=True)
class McNemarResult:
	"""McNemar statistic and exact one-sided sign-test P-value.

	Attributes:
		statistic: (b - c)^2 / (b + c)
		p_value: P(Binomial(b + c, 1/2) >= b)
	"""

	statistic: float
	p_value: float


@dataclass(frozen=True)
class PairCounts:
	"""McNemar-style counts of matched pairs.

	Attributes:
		a: Case exposed, control exposed
		b: Case exposed, control unexposed
		c: Case unexposed, control exposed
		d: Case unexposed, control unexposed
	"""

	a: int
	b: int
	c: int
	d: int

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		for name in ('a', 'b', 'c', 'd'):
			value = getattr(self, name)
			if isinstance(value, bool) or not isinstance(value, int) or value < 0:
				logger.error(f'Invalid pair count {name}={value!r}')
				raise StudyValidationError(
					f'pair count {name} must be a nonnegative integer, got {value!r}'
				)

	def __add__(self, other: 'PairCounts') -> 'PairCounts':
		"""Merges two tables element-wise."""
		if not isinstance(other, PairCounts):
			return NotImplemented
		return PairCounts(
			self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
		)

	@property
	def n_pairs(self) -> int:
		"""Total number of pairs."""
		return self.a + self.b + self.c + self.d

	@property
	def discordant(self) -> int:
		"""Number of discordant pairs b + c."""
		return self.b + self.c

	@property
	def exposed_cases(self) -> int:
		"""Number of exposed cases a + b."""
		return self.a + self.b

	def odds_ratio(self, level: float = 0.95) -> OddsRatio:
		"""Conditional (matched-pair) odds ratio b / c.

		Args:
			level: Confidence level of the log-scale normal interval

		Returns:
			OddsRatio with interval exp(ln(b/c) +- z * sqrt(1/b + 1/c))

		Raises:
			UndefinedEstimateError: If b or c is zero
		"""
		if self.b == 0 or self.c == 0:
			logger.error(f'Odds ratio undefined for b={self.b}, c={self.c}')
			raise UndefinedEstimateError(
				f'odds ratio undefined: b={self.b}, c={self.c} (both must be positive)'
			)

		estimate = self.b / self.c
		half_width = norm.ppf(0.5 + level / 2) * math.sqrt(1 / self.b + 1 / self.c)
		log_estimate = math.log(estimate)
		return OddsRatio(
			estimate=estimate,
			lower=math.exp(log_estimate - half_width),
			upper=math.exp(log_estimate + half_width),
			level=level,
		)

	def mcnemar(self) -> McNemarResult:
		"""Randomization test of no effect on the discordant pairs (Gamma = 1)."""
		n = self.discordant
		if n == 0:
			return McNemarResult(statistic=0.0, p_value=1.0)
		statistic = (self.b - self.c) ** 2 / n
		p_value = float(binom.sf(self.b - 1, n, 0.5))
		return McNemarResult(statistic=statistic, p_value=p_value)
