"""Sharp per-set probability bounds and tail probabilities of bounded Bernoulli sums.

Under the hidden-bias parameter Gamma and the selection-bias parameter Theta,
the chance that the case of a matched set is an exposed unit is bounded per
set. Sums of such independent Bernoulli variables are then bounded in the
stochastic order, which turns the bounds into bounds on one-sided P-values.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom, norm

from ..errors import DomainError

logger = logging.getLogger(__name__)

# Slack for floating-point noise when checking probabilities
_PROB_TOL = 1e-12


@dataclass(frozen=True)
class SensParams:
	"""Sensitivity parameters.

	Attributes:
		gamma: Hidden-bias odds bound (>= 1)
		theta: Selection-bias relative-risk bound (>= 1)
	"""

	gamma: float = 1.0
	theta: float = 1.0

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		for name in ('gamma', 'theta'):
			value = getattr(self, name)
			if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 1:
				logger.error(f'Invalid sensitivity parameter {name}={value!r}')
				raise DomainError(f'{name} must be a finite number >= 1, got {value!r}')

	@property
	def odds(self) -> float:
		"""Combined upper odds multiplier Gamma * Theta."""
		return self.gamma * self.theta


@dataclass(frozen=True)
class BernoulliBounds:
	"""Lower and upper bounds on a per-set success probability.

	Attributes:
		lower: Lower bound
		upper: Upper bound
	"""

	lower: float
	upper: float

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not (
			-_PROB_TOL <= self.lower <= self.upper + _PROB_TOL
			and self.upper <= 1 + _PROB_TOL
		):
			logger.error(f'Inconsistent bounds lower={self.lower}, upper={self.upper}')
			raise DomainError(
				f'bounds must satisfy 0 <= lower <= upper <= 1, got ({self.lower}, {self.upper})'
			)


def _check_set(z_plus: int, size: int) -> None:
	if size < 2 or not 0 <= z_plus <= size:
		logger.error(f'Invalid set shape Z+={z_plus}, J={size}')
		raise DomainError(f'need J >= 2 and 0 <= Z+ <= J, got Z+={z_plus}, J={size}')


def _lower(m: int, size: int, gamma: float) -> float:
	return m / (m + gamma * (size - m)) if m else 0.0


def _upper(m: int, size: int, odds: float) -> float:
	return odds * m / (odds * m + (size - m)) if m else 0.0


def sign_score_bounds(z_plus: int, size: int, gamma: float) -> BernoulliBounds:
	"""Bounds on the chance that the case is exposed under hidden bias only.

	Args:
		z_plus: Number of exposed units Z+
		size: Set size J
		gamma: Hidden-bias bound

	Returns:
		(Z+ / (Z+ + (J - Z+) Gamma), Gamma Z+ / (Gamma Z+ + J - Z+))
	"""
	_check_set(z_plus, size)
	params = SensParams(gamma=gamma)
	return BernoulliBounds(
		lower=_lower(z_plus, size, params.gamma), upper=_upper(z_plus, size, params.gamma)
	)


def gamma_theta_bounds(z_plus: int, size: int, params: SensParams) -> BernoulliBounds:
	"""Bounds on the chance that the case is exposed under hidden and selection bias.

	Theta enters the upper bound only. The upper denominator uses J - Z+ so
	that Theta = 1 recovers sign_score_bounds for every set shape.

	Args:
		z_plus: Number of exposed units Z+
		size: Set size J
		params: Sensitivity parameters

	Returns:
		BernoulliBounds
	"""
	_check_set(z_plus, size)
	return BernoulliBounds(
		lower=_lower(z_plus, size, params.gamma), upper=_upper(z_plus, size, params.odds)
	)


def attributable_prob_bounds(
	z_plus: int, rc_plus: int, size: int, params: SensParams
) -> BernoulliBounds:
	"""Bounds on the chance that a set contributes to the adjusted sign score.

	With m = Z+ * rC+, the lower bound is m / (m + Gamma (J - m)) and the upper
	bound Gamma Theta m / (Gamma Theta m + J - m). A set whose case is
	attributed to exposure (rC+ = 0) contributes nothing.

	Args:
		z_plus: Number of exposed units Z+
		rc_plus: 1 if the set keeps a case under the hypothesis, 0 if nulled
		size: Set size J
		params: Sensitivity parameters

	Returns:
		BernoulliBounds
	"""
	_check_set(z_plus, size)
	if rc_plus not in (0, 1):
		logger.error(f'Invalid rC+={rc_plus!r}')
		raise DomainError(f'rC+ must be 0 or 1, got {rc_plus!r}')

	m = z_plus * rc_plus
	return BernoulliBounds(
		lower=_lower(m, size, params.gamma), upper=_upper(m, size, params.odds)
	)


def _as_probabilities(probs: Sequence[float] | np.ndarray) -> np.ndarray:
	values = np.asarray(probs, dtype=float).ravel()
	if values.size and (
		not np.all(np.isfinite(values))
		or values.min() < -_PROB_TOL
		or values.max() > 1 + _PROB_TOL
	):
		logger.error('Probability vector has entries outside [0, 1]')
		raise DomainError('probabilities must lie in [0, 1]')
	return np.clip(values, 0.0, 1.0)


def pb_pmf(probs: Sequence[float] | np.ndarray) -> np.ndarray:
	"""Probability mass function of a sum of independent Bernoulli variables.

	Equal probabilities are grouped into binomial blocks whose mass
	functions are convolved, which is exact and cheap when sets fall into a
	few strata.

	Args:
		probs: Success probability of each variable

	Returns:
		Array of length len(probs) + 1 with P(sum = k)
	"""
	values = _as_probabilities(probs)
	pmf = np.array([1.0])
	unique, counts = np.unique(values, return_counts=True)
	for p, count in zip(unique, counts, strict=True):
		block = binom.pmf(np.arange(count + 1), count, p)
		pmf = np.convolve(pmf, block)
	return pmf


def pb_tail_exact(probs: Sequence[float] | np.ndarray, k: int) -> float:
	"""Exact upper tail P(sum of Bernoulli(p_i) >= k).

	Args:
		probs: Success probability of each variable
		k: Threshold

	Returns:
		Tail probability (1 for k <= 0, 0 for k > len(probs))
	"""
	values = _as_probabilities(probs)
	if k <= 0:
		return 1.0
	if k > values.size:
		return 0.0
	pmf = pb_pmf(values)
	return float(min(1.0, max(0.0, pmf[k:].sum())))


def tail_normal(t: int, a0: int, probs: Sequence[float] | np.ndarray) -> float:
	"""Normal approximation to P(sum of Bernoulli(p_i) >= T - A0).

	Computes 1 - Phi((T - A0 - sum p) / sqrt(sum p (1 - p))) without a
	continuity correction.

	Args:
		t: Observed sign-score statistic T
		a0: Hypothesized attributable effect A0
		probs: Per-set success probabilities

	Returns:
		Approximate tail probability
	"""
	values = _as_probabilities(probs)
	if values.size == 0:
		logger.error('Normal tail requested for an empty probability vector')
		raise DomainError('tail_normal needs at least one probability')

	mean = float(values.sum())
	variance = float(np.sum(values * (1.0 - values)))
	deviation = (t - a0) - mean
	if variance <= 0.0:
		return 1.0 if deviation <= 0 else 0.0
	return float(norm.sf(deviation / math.sqrt(variance)))


def paired_upper_pvalue(b: int, c: int, a_star: int, params: SensParams) -> float:
	"""Upper-bound P-value for attributable effect a* on 1:1 discordant pairs.

	Computes 1 - Phi(((b - a*) - (b + c - a*) p) / sqrt((b + c - a*) p (1 - p)))
	with p = Gamma Theta / (1 + Gamma Theta).

	Args:
		b: Pairs with exposed case and unexposed control
		c: Pairs with unexposed case and exposed control
		a_star: Hypothesized attributable effect (among the b pairs)
		params: Sensitivity parameters

	Returns:
		Upper-bound P-value

	Raises:
		DomainError: If a* exceeds b or no discordant pair remains
	"""
	if a_star < 0 or b < 0 or c < 0:
		raise DomainError(f'counts must be nonnegative, got b={b}, c={c}, a*={a_star}')
	if a_star > b:
		logger.error(f'a*={a_star} exceeds b={b}')
		raise DomainError('more attributable cases than exposed discordant cases')
	remaining = b + c - a_star
	if remaining < 1:
		raise DomainError('no discordant pairs remain after removing attributable cases')

	p = _upper(1, 2, params.odds)
	return tail_normal(b, a_star, np.full(remaining, p))
