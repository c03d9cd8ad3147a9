"""Combination of independent one-sided P-values across case subtypes."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import chdtrc, comb, ndtr, ndtri

from ..errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

MERGED = 'merged'
COMBINERS = ('stouffer', 'weighted_stouffer', 'fisher', 'truncated', 'bonferroni')
METHODS = (MERGED, *COMBINERS)

# Smallest P-value passed to a logarithm or a normal quantile
_P_FLOOR = np.finfo(float).tiny
_P_CEIL = 1.0 - np.finfo(float).eps


@dataclass(frozen=True)
class PValueVector:
	"""Independent P-values with optional positive weights.

	Attributes:
		ps: P-values in [0, 1]
		weights: Weights, one per P-value (optional)
	"""

	ps: tuple[float, ...]
	weights: tuple[float, ...] | None = None

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not self.ps:
			logger.error('Empty P-value vector')
			raise DomainError('at least one P-value is required')
		if any(not (0.0 <= p <= 1.0) for p in self.ps):
			logger.error(f'P-values outside [0, 1]: {self.ps}')
			raise DomainError(f'P-values must lie in [0, 1], got {self.ps}')
		if self.weights is not None:
			if len(self.weights) != len(self.ps):
				raise DomainError(
					f'{len(self.weights)} weights for {len(self.ps)} P-values'
				)
			if any(not (w > 0 and math.isfinite(w)) for w in self.weights):
				logger.error(f'Non-positive weights: {self.weights}')
				raise DomainError(f'weights must be positive, got {self.weights}')

	@classmethod
	def of(
		cls, ps: Sequence[float], weights: Sequence[float] | None = None
	) -> 'PValueVector':
		"""Creates vector from any sequences of numbers."""
		return cls(
			ps=tuple(float(p) for p in ps),
			weights=tuple(float(w) for w in weights) if weights is not None else None,
		)

	def __len__(self) -> int:
		"""Number of P-values L."""
		return len(self.ps)

	def clamped(self) -> np.ndarray:
		"""P-values clamped to the open unit interval."""
		return np.clip(np.asarray(self.ps), _P_FLOOR, _P_CEIL)


def bonferroni(ps: Sequence[float]) -> float:
	"""Bonferroni combination min(1, L * min p)."""
	vector = PValueVector.of(ps)
	return min(1.0, len(vector) * min(vector.ps))


def fisher(ps: Sequence[float]) -> float:
	"""Fisher's combination: -2 sum log p against chi-square with 2L degrees of freedom.

	P-values of zero are clamped to the smallest positive float.
	"""
	vector = PValueVector.of(ps)
	statistic = -2.0 * float(np.sum(np.log(np.maximum(np.asarray(vector.ps), _P_FLOOR))))
	return float(chdtrc(2 * len(vector), statistic))


def truncated_product(ps: Sequence[float], trunc: float = 0.05) -> float:
	"""Truncated product combination.

	The statistic is the product w of the P-values not exceeding the
	truncation point tau, and the combined P-value is

	    sum_k C(L, k) (1 - tau)^(L - k) * F_k(w)

	with F_k(w) = w * sum_{s<k} (k ln tau - ln w)^s / s! when w <= tau^k and
	tau^k otherwise. When no P-value is at most tau the product is empty
	and the combined P-value is 1.

	Args:
		ps: P-values
		trunc: Truncation point tau in (0, 1]

	Returns:
		Combined P-value
	"""
	if not 0.0 < trunc <= 1.0:
		logger.error(f'Invalid truncation point {trunc}')
		raise DomainError(f'truncation point must lie in (0, 1], got {trunc}')

	vector = PValueVector.of(ps)
	if trunc == 1.0:
		return fisher(vector.ps)

	kept = [max(p, _P_FLOOR) for p in vector.ps if p <= trunc]
	if not kept:
		return 1.0

	n = len(vector)
	log_w = float(np.sum(np.log(kept)))
	log_tau = math.log(trunc)

	total = 0.0
	for k in range(1, n + 1):
		weight = comb(n, k) * (1.0 - trunc) ** (n - k)
		if log_w <= k * log_tau:
			gap = k * log_tau - log_w
			series = sum(
				math.exp(log_w + s * math.log(gap) - math.lgamma(s + 1)) if gap > 0 else 0.0
				for s in range(1, k)
			)
			total += weight * (math.exp(log_w) + series)
		else:
			total += weight * trunc**k

	return min(1.0, total)


def stouffer(ps: Sequence[float]) -> float:
	"""Stouffer's combination 1 - Phi(sum Phi^-1(1 - p_k) / sqrt(L)).

	P-values of 0 and 1 are clamped into the open unit interval.
	"""
	vector = PValueVector.of(ps)
	scores = -ndtri(vector.clamped())
	return float(ndtr(-scores.sum() / math.sqrt(len(vector))))


def weighted_stouffer(ps: Sequence[float], weights: Sequence[float]) -> float:
	"""Weighted Stouffer combination 1 - Phi(sum w_k Z_k / sqrt(sum w_k^2)).

	Args:
		ps: P-values
		weights: Positive weights, typically the square roots of group sizes

	Returns:
		Combined P-value
	"""
	vector = PValueVector.of(ps, weights)
	w = np.asarray(vector.weights)
	scores = -ndtri(vector.clamped())
	return float(ndtr(-float(np.dot(w, scores)) / math.sqrt(float(np.dot(w, w)))))


def combine(
	method: str,
	ps: Sequence[float],
	weights: Sequence[float] | None = None,
	trunc: float = 0.05,
) -> float:
	"""Combines P-values with the named method.

	Args:
		method: One of COMBINERS
		ps: P-values
		weights: Weights for weighted_stouffer
		trunc: Truncation point for truncated

	Returns:
		Combined P-value

	Raises:
		ConfigError: If the method is unknown or needs missing weights
	"""
	if method == 'bonferroni':
		return bonferroni(ps)
	if method == 'fisher':
		return fisher(ps)
	if method == 'truncated':
		return truncated_product(ps, trunc)
	if method == 'stouffer':
		return stouffer(ps)
	if method == 'weighted_stouffer':
		if weights is None:
			raise ConfigError('weighted_stouffer requires weights')
		return weighted_stouffer(ps, weights)

	check_method(method)
	logger.error(f'Method {method!r} does not combine P-values')
	raise ConfigError('merged analysis pools the data and does not combine P-values')


def check_method(method: str) -> None:
	"""Raises ConfigError unless method is merged or a known combiner."""
	if method not in METHODS:
		logger.error(f'Unknown method {method!r}')
		raise ConfigError(
			f'unknown method {method!r}; expected one of {", ".join(METHODS)}'
		)
