"""Configuration of simulated case-referent data."""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from ..errors import AFeSensError, ConfigError
from ..inference.bounds import SensParams
from ..inference.combiners import COMBINERS, MERGED, check_method
from ..utils.data_utils import DataUtils

logger = logging.getLogger(__name__)

DEFAULT_METHODS = (MERGED, *COMBINERS)


@dataclass(frozen=True)
class DGPConfig:
	"""Two-subtype cohort simulation settings.

	Each unit is exposed with probability 1/2 and has potential outcomes
	r_T ~ Bernoulli(baseline + delta) and r_C ~ Bernoulli(baseline).

	Attributes:
		n: Units per simulated cohort
		delta1: Average exposure effect in the first subtype's cohort
		delta2: Average exposure effect in the second subtype's cohort
		baseline: Event probability without exposure p2
		reps: Replicates
		alpha: Test level
		trunc: Truncation point of the truncated product
		seed: Master seed
		gammas: Hidden-bias grid
		thetas: Selection-bias grid
		methods: Analysis methods
	"""

	n: int = 500
	delta1: float = 0.2
	delta2: float = 0.2
	baseline: float = 0.2
	reps: int = 200
	alpha: float = 0.05
	trunc: float = 0.05
	seed: int = 0
	gammas: tuple[float, ...] = (1.0,)
	thetas: tuple[float, ...] = (1.0,)
	methods: tuple[str, ...] = field(default=DEFAULT_METHODS)

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		problems = []
		if self.n < 2:
			problems.append(f'n must be >= 2, got {self.n}')
		if self.reps < 1:
			problems.append(f'reps must be >= 1, got {self.reps}')
		for name in ('delta1', 'delta2'):
			delta = getattr(self, name)
			if not (0.0 <= self.baseline and 0.0 <= self.baseline + delta <= 1.0):
				problems.append(
					f'{name}={delta} with baseline={self.baseline} is not a probability'
				)
		if not 0.0 < self.alpha < 1.0:
			problems.append(f'alpha must lie in (0, 1), got {self.alpha}')
		if not 0.0 < self.trunc <= 1.0:
			problems.append(f'trunc must lie in (0, 1], got {self.trunc}')
		if not self.gammas or not self.thetas or not self.methods:
			problems.append('gammas, thetas and methods must be nonempty')

		if problems:
			logger.error(f'Invalid simulation config: {"; ".join(problems)}')
			raise ConfigError('; '.join(problems))

		try:
			for gamma in self.gammas:
				for theta in self.thetas:
					SensParams(gamma=gamma, theta=theta)
			for method in self.methods:
				check_method(method)
		except AFeSensError as e:
			raise ConfigError(str(e)) from e

		logger.debug(f'Created simulation config {self}')

	@property
	def deltas(self) -> tuple[float, float]:
		"""Effects of the two subtypes."""
		return (self.delta1, self.delta2)


@dataclass(frozen=True)
class GroupDGP:
	"""One subtype of the paired design-sensitivity generator.

	Attributes:
		share: Fraction of the matched pairs in this subtype
		discordant_prob: Probability that a pair is discordant in exposure
		case_exposed_prob: Probability that the case is the exposed member of a discordant pair
		label: Subtype label
	"""

	share: float
	discordant_prob: float
	case_exposed_prob: float
	label: str = ''

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		for name in ('share', 'discordant_prob', 'case_exposed_prob'):
			value = getattr(self, name)
			if not 0.0 <= value <= 1.0:
				logger.error(f'Invalid group setting {name}={value}')
				raise ConfigError(f'{name} must lie in [0, 1], got {value}')

	@property
	def design_sensitivity(self) -> float:
		"""Limit design sensitivity p / (1 - p) of the merged test on this group."""
		p = self.case_exposed_prob
		return math.inf if p >= 1.0 else p / (1.0 - p)


@dataclass(frozen=True)
class PairedDGPConfig:
	"""Paired generator for design sensitivity: one GroupDGP per subtype.

	Attributes:
		groups: Subtype generators; shares must sum to 1
	"""

	groups: tuple[GroupDGP, ...]

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not self.groups:
			raise ConfigError('at least one group is required')
		total = sum(group.share for group in self.groups)
		if not math.isclose(total, 1.0, abs_tol=1e-9):
			logger.error(f'Group shares sum to {total}')
			raise ConfigError(f'group shares must sum to 1, got {total}')
		labels = self.labels
		if len(set(labels)) != len(labels):
			raise ConfigError(f'duplicate group labels {labels}')

	@property
	def labels(self) -> tuple[str, ...]:
		"""Group labels, defaulting to group1, group2, ..."""
		return tuple(
			group.label or f'group{index}' for index, group in enumerate(self.groups, start=1)
		)

	def only(self, index: int) -> 'PairedDGPConfig':
		"""Single-group config holding the given group with share 1."""
		group = self.groups[index]
		return PairedDGPConfig(
			groups=(replace(group, share=1.0, label=self.labels[index]),)
		)


_INT_KEYS = {'n', 'reps', 'seed'}
_FLOAT_KEYS = {'delta1', 'delta2', 'baseline', 'alpha', 'trunc'}
_LIST_KEYS = {'gammas', 'thetas', 'methods'}


def _coerce(key: str, value: Any, line: int | None = None) -> Any:
	where = f' (line {line})' if line is not None else ''
	if isinstance(value, str):
		if key in _LIST_KEYS:
			try:
				if key == 'methods':
					return tuple(DataUtils.parse_str_list(value))
				return tuple(DataUtils.parse_float_list(value))
			except ValueError as e:
				raise ConfigError(f'{key}{where}: {e}') from e
		number = DataUtils.convert_to_number(value)
		if number is None:
			raise ConfigError(f'{key}{where}: not a number: {value!r}')
		value = number

	if key in _INT_KEYS:
		if isinstance(value, float) and not value.is_integer():
			raise ConfigError(f'{key}{where} must be an integer, got {value!r}')
		return int(value)
	if key in _FLOAT_KEYS:
		return float(value)
	return tuple(value)


def load_config(
	source: str | Path | None = None, overrides: Mapping[str, Any] | None = None
) -> DGPConfig:
	"""Loads a simulation config from a flat key = value file.

	Lines are ``key = value``; ``#`` starts a comment and blank lines are
	ignored. Lists are comma-separated. Overrides win over file values.

	Args:
		source: Path of the config file, or None for defaults
		overrides: Values taking precedence over the file (None values ignored)

	Returns:
		DGPConfig object

	Raises:
		ConfigError: If a key is unknown or a value malformed
	"""
	known = {f.name for f in fields(DGPConfig)}
	values: dict[str, Any] = {}

	if source is not None:
		path = Path(source)
		try:
			text = path.read_text(encoding='utf-8')
		except OSError as e:
			logger.error(f'Cannot read config {path}: {e}')
			raise ConfigError(f'cannot read config {path}: {e}') from e

		for line_number, raw in enumerate(text.splitlines(), start=1):
			line = raw.split('#', 1)[0].strip()
			if not line:
				continue
			if '=' not in line:
				raise ConfigError(f'line {line_number}: expected key = value')
			key, value = (part.strip() for part in line.split('=', 1))
			key = key.lower()
			if key not in known:
				logger.error(f'Unknown config key {key!r} on line {line_number}')
				raise ConfigError(f'line {line_number}: unknown key {key!r}')
			values[key] = _coerce(key, value, line_number)

	for key, value in (overrides or {}).items():
		if value is None:
			continue
		if key not in known:
			raise ConfigError(f'unknown key {key!r}')
		values[key] = _coerce(key, value)

	config = DGPConfig(**values)
	logger.info(
		f'Loaded simulation config: n={config.n}, deltas={config.deltas}, reps={config.reps}, seed={config.seed}'
	)
	return config
