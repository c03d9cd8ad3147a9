"""Power of the sensitivity analysis and design sensitivity."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.stats import norm

from ..errors import BracketError, ConfigError, DomainError
from ..utils.workers import map_ordered, replicate_rng
from .attributable import StudyData, as_design, set_probabilities
from .bounds import SensParams
from .combiners import MERGED, check_method

if TYPE_CHECKING:
	from ..simulation.config import PairedDGPConfig

logger = logging.getLogger(__name__)

# Methods with an analytic power formula
ANALYTIC_METHODS = (MERGED, 'stouffer', 'weighted_stouffer')

# Replicates drawn from one random stream by simulate_power
_BLOCK = 1000


@dataclass(frozen=True, eq=False)
class PowerSpec:
	"""Inputs of the analytic power formulas.

	Attributes:
		alpha: Test level
		a_star: Attributable effect per group (one entry for the merged study)
		probabilities: Upper-bound success probability of every set, per group
		weights: Group weights for the weighted Stouffer power (default sqrt of group sizes)
	"""

	alpha: float
	a_star: tuple[int, ...]
	probabilities: tuple[np.ndarray, ...]
	weights: tuple[float, ...] | None = None

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not 0.0 < self.alpha < 1.0:
			raise DomainError(f'alpha must lie in (0, 1), got {self.alpha}')
		if len(self.a_star) != len(self.probabilities) or not self.a_star:
			logger.error(
				f'{len(self.a_star)} attributable effects for {len(self.probabilities)} groups'
			)
			raise DomainError('need one attributable effect per group')
		if any(a < 0 for a in self.a_star):
			raise DomainError(f'attributable effects must be nonnegative, got {self.a_star}')
		for probs in self.probabilities:
			if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
				raise DomainError('probabilities must lie in [0, 1]')
		if self.weights is not None and len(self.weights) != len(self.a_star):
			raise DomainError(f'{len(self.weights)} weights for {len(self.a_star)} groups')

	@property
	def n_groups(self) -> int:
		"""Number of groups L."""
		return len(self.a_star)

	@property
	def means(self) -> tuple[float, ...]:
		"""Per-group sums of the probabilities."""
		return tuple(float(p.sum()) for p in self.probabilities)

	@property
	def variances(self) -> tuple[float, ...]:
		"""Per-group sums of p (1 - p)."""
		return tuple(float(np.sum(p * (1.0 - p))) for p in self.probabilities)

	@property
	def group_weights(self) -> tuple[float, ...]:
		"""Weights of the weighted Stouffer power."""
		if self.weights is not None:
			return self.weights
		return tuple(math.sqrt(p.size) for p in self.probabilities)

	def merged(self) -> 'PowerSpec':
		"""Spec of the merged study: pooled sets and total effect."""
		return PowerSpec(
			alpha=self.alpha,
			a_star=(sum(self.a_star),),
			probabilities=(np.concatenate(self.probabilities),),
		)


def _from_noncentrality(noncentrality: float, alpha: float) -> float:
	if math.isinf(noncentrality):
		return 1.0
	return float(norm.sf(norm.isf(alpha) - noncentrality))


def _group_scores(spec: PowerSpec) -> list[float]:
	scores = []
	for a, variance in zip(spec.a_star, spec.variances, strict=True):
		if variance > 0.0:
			scores.append(a / math.sqrt(variance))
		else:
			scores.append(math.inf if a > 0 else 0.0)
	return scores


def power_merged(spec: PowerSpec) -> float:
	"""Power 1 - Phi(z_{1-alpha} - a* / sqrt(sum p (1 - p))) of the merged test.

	Groups are pooled. With zero variance the power is 1 if a* > 0 and 0
	otherwise.
	"""
	a = sum(spec.a_star)
	variance = sum(spec.variances)
	if variance <= 0.0:
		return 1.0 if a > 0 else 0.0
	return _from_noncentrality(a / math.sqrt(variance), spec.alpha)


def power_stouffer(spec: PowerSpec) -> float:
	"""Power of Stouffer's combination of the per-group tests."""
	scores = _group_scores(spec)
	return _from_noncentrality(sum(scores) / math.sqrt(spec.n_groups), spec.alpha)


def power_weighted_stouffer(spec: PowerSpec) -> float:
	"""Power of the weighted Stouffer combination of the per-group tests."""
	weights = spec.group_weights
	scores = _group_scores(spec)
	numerator = sum(w * s for w, s in zip(weights, scores, strict=True) if w and s)
	return _from_noncentrality(
		numerator / math.sqrt(sum(w * w for w in weights)), spec.alpha
	)


def analytic_power(spec: PowerSpec, method: str) -> float:
	"""Analytic power of the named method.

	Raises:
		ConfigError: If the method has no analytic power formula
	"""
	check_method(method)
	if method == MERGED:
		return power_merged(spec)
	if method == 'stouffer':
		return power_stouffer(spec)
	if method == 'weighted_stouffer':
		return power_weighted_stouffer(spec)
	raise ConfigError(
		f'no analytic power for {method}; use one of {", ".join(ANALYTIC_METHODS)}'
	)


def power_dominance_check(
	merged_spec: PowerSpec, combined_spec: PowerSpec, weighted: bool = False
) -> bool:
	"""Whether the combined test's power is at least the merged test's power.

	Args:
		merged_spec: Spec of the merged study
		combined_spec: Per-group spec of the same study
		weighted: Compare the weighted Stouffer power instead of the plain one

	Returns:
		True iff combined power >= merged power
	"""
	merged = power_merged(merged_spec)
	combined = (
		power_weighted_stouffer(combined_spec) if weighted else power_stouffer(combined_spec)
	)
	logger.debug(f'Merged power {merged:.6g} vs combined power {combined:.6g}')
	return combined >= merged


def power_spec_from_study(
	data: StudyData,
	params: SensParams,
	a_star: int | Sequence[int],
	alpha: float = 0.05,
	combined: bool = False,
) -> PowerSpec:
	"""Builds a power spec from study data.

	Probabilities are the upper bounds under no attributable effect (every
	observed case kept).

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		a_star: Attributable effect, total or per subtype
		alpha: Test level
		combined: Per-subtype spec if True, merged spec otherwise

	Returns:
		PowerSpec object
	"""
	design = as_design(data)
	efforts = (a_star,) if isinstance(a_star, int) else tuple(int(a) for a in a_star)
	if not combined:
		return PowerSpec(
			alpha=alpha,
			a_star=(sum(efforts),),
			probabilities=(set_probabilities(design.merged, params),),
		)
	return PowerSpec(
		alpha=alpha,
		a_star=efforts,
		probabilities=tuple(set_probabilities(g, params) for g in design.groups),
		weights=tuple(design.weights),
	)


def simulate_power(
	spec: PowerSpec,
	method: str = MERGED,
	reps: int = 10_000,
	seed: int = 0,
	workers: int | None = None,
) -> float:
	"""Monte Carlo rejection frequency of the normal-theory test behind a power formula.

	Each replicate draws the sign score of every group as a sum of Bernoulli
	variables with the spec's probabilities, shifts it by the group's
	attributable effect and applies the one-sided normal test.

	Args:
		spec: Power spec
		method: merged, stouffer or weighted_stouffer
		reps: Replicates
		seed: Master seed
		workers: Worker count

	Returns:
		Fraction of replicates that reject
	"""
	if method not in ANALYTIC_METHODS:
		check_method(method)
		raise ConfigError(f'no power simulation for {method}')
	if reps < 1:
		raise ConfigError(f'reps must be >= 1, got {reps}')

	if method == MERGED:
		spec = spec.merged()
	critical = float(norm.isf(spec.alpha))
	means = np.asarray(spec.means)
	sds = np.sqrt(np.asarray(spec.variances))
	efforts = np.asarray(spec.a_star, dtype=float)
	if method == 'weighted_stouffer':
		weights = np.asarray(spec.group_weights)
	else:
		weights = np.ones(spec.n_groups)
	strata = [np.unique(p, return_counts=True) for p in spec.probabilities]

	def block(index: int) -> int:
		rng = replicate_rng(seed, index)
		size = min(_BLOCK, reps - index * _BLOCK)
		scores = np.empty((size, spec.n_groups))
		for k, (values, counts) in enumerate(strata):
			draws = np.zeros(size)
			for p, count in zip(values, counts, strict=True):
				draws += rng.binomial(count, p, size=size)
			deviation = draws + efforts[k] - means[k]
			if sds[k] > 0.0:
				scores[:, k] = deviation / sds[k]
			else:
				scores[:, k] = np.where(deviation > 0, np.inf, 0.0)
		combined = scores @ weights / math.sqrt(float(weights @ weights))
		return int(np.sum(combined > critical))

	n_blocks = -(-reps // _BLOCK)
	rejections = sum(map_ordered(block, range(n_blocks), workers))
	return rejections / reps


@dataclass(frozen=True)
class PowerPoint:
	"""Power of one method at one (Gamma, Theta).

	Attributes:
		gamma: Hidden-bias parameter
		theta: Selection-bias parameter
		method: Analysis method
		power: Analytic power, or the Monte Carlo estimate when simulated
		mc_stderr: Monte Carlo standard error (None for analytic values)
	"""

	gamma: float
	theta: float
	method: str
	power: float
	mc_stderr: float | None = None


def power_curve(
	data: StudyData,
	gammas: Sequence[float],
	thetas: Sequence[float] = (1.0,),
	a_star: int | Sequence[int] = 0,
	methods: Sequence[str] = (MERGED,),
	alpha: float = 0.05,
	reps: int = 0,
	seed: int = 0,
	workers: int | None = None,
) -> list[PowerPoint]:
	"""Power over a (Gamma, Theta) grid.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		gammas: Gamma grid
		thetas: Theta grid
		a_star: Attributable effect, total or per subtype
		methods: Methods with an analytic power formula
		alpha: Test level
		reps: Monte Carlo replicates; 0 for analytic power only
		seed: Master seed of the Monte Carlo
		workers: Worker count

	Returns:
		Points sorted by Gamma, Theta and method order
	"""
	for method in methods:
		if method not in ANALYTIC_METHODS:
			check_method(method)
			raise ConfigError(f'no analytic power for {method}')

	points = []
	for gamma in sorted(gammas):
		for theta in sorted(thetas):
			params = SensParams(gamma=gamma, theta=theta)
			for method in methods:
				spec = power_spec_from_study(
					data, params, a_star, alpha, combined=method != MERGED
				)
				if reps:
					power = simulate_power(spec, method, reps, seed, workers)
					stderr = math.sqrt(power * (1.0 - power) / reps)
					points.append(PowerPoint(gamma, theta, method, power, stderr))
				else:
					points.append(PowerPoint(gamma, theta, method, analytic_power(spec, method)))

	logger.info(f'Computed {len(points)} power values')
	return points


@dataclass(frozen=True)
class DesignSensitivityEstimate:
	"""Monte Carlo estimate of the design sensitivity.

	Attributes:
		estimate: Gamma at which power crosses 0.5
		lower: Largest evaluated Gamma with power >= 0.5
		upper: Smallest evaluated Gamma with power < 0.5
		method: Analysis method
		theta: Selection-bias parameter
		n_sets: Matched sets per simulated study
		reps: Replicates per power evaluation
		mc_stderr: Monte Carlo standard error of power at the crossing
		curve: Coarse (Gamma, power) evaluations
	"""

	estimate: float
	lower: float
	upper: float
	method: str
	theta: float
	n_sets: int
	reps: int
	mc_stderr: float
	curve: tuple[tuple[float, float], ...]

	@property
	def half_width(self) -> float:
		"""Half the width of the final bisection bracket."""
		return (self.upper - self.lower) / 2.0


def estimate_design_sensitivity(
	generator: 'PairedDGPConfig',
	theta: float = 1.0,
	method: str = MERGED,
	alpha: float = 0.05,
	n_sets: int = 10_000,
	reps: int = 100,
	tol: float = 0.02,
	gamma_range: tuple[float, float] = (1.0, 10.0),
	trunc: float = 0.05,
	seed: int = 0,
	grid_points: int = 10,
	workers: int | None = None,
) -> DesignSensitivityEstimate:
	"""Locates the Gamma at which the power of a large study crosses 0.5.

	The same simulated studies are reused at every Gamma, so the estimated
	power curve is a step function that bisection can search exactly.

	Args:
		generator: Paired data generator
		theta: Selection-bias parameter
		method: Analysis method
		alpha: Test level
		n_sets: Matched sets per simulated study (at least 10,000)
		reps: Simulated studies
		tol: Width of the final bracket
		gamma_range: Search interval for Gamma
		trunc: Truncation point of the truncated product
		seed: Master seed
		grid_points: Coarse grid size evaluated before bisection
		workers: Worker count

	Returns:
		DesignSensitivityEstimate

	Raises:
		BracketError: If power is still >= 0.5 at the top of the range
	"""
	from ..simulation.harness import generate_pairs, rejection_matrix

	check_method(method)
	lo, hi = gamma_range
	if n_sets < 10_000:
		raise ConfigError(f'n_sets must be at least 10000, got {n_sets}')
	if tol <= 0.0 or reps < 1 or not 1.0 <= lo < hi or grid_points < 2:
		logger.error(f'Invalid search settings tol={tol}, reps={reps}, range={gamma_range}')
		raise ConfigError(
			'need tol > 0, reps >= 1, 1 <= gamma_low < gamma_high and grid_points >= 2'
		)

	datasets = map_ordered(
		lambda r: generate_pairs(generator, n_sets, replicate_rng(seed, r)), range(reps), workers
	)

	def power_at(gamma: float) -> float:
		params = SensParams(gamma=gamma, theta=theta)
		return float(rejection_matrix(datasets, [params], [method], alpha, trunc, workers).mean())

	grid = np.linspace(lo, hi, grid_points)
	curve = tuple((float(g), power_at(float(g))) for g in grid)
	powers = [p for _, p in curve]
	if any(later > earlier for earlier, later in zip(powers, powers[1:])):
		logger.warning(f'Power curve is not monotone in gamma: {curve}')

	stderr = math.sqrt(0.25 / reps)
	if powers[0] < 0.5:
		logger.info(f'Power {powers[0]:.3g} < 0.5 already at gamma={lo}')
		return DesignSensitivityEstimate(
			lo, lo, lo, method, theta, n_sets, reps, stderr, curve
		)
	if powers[-1] >= 0.5:
		logger.error(f'Power {powers[-1]:.3g} >= 0.5 at gamma={hi}')
		raise BracketError(
			f'power is still {powers[-1]:.3g} at gamma={hi}; widen the gamma range'
		)

	index = next(i for i, p in enumerate(powers) if p < 0.5)
	lower, upper = curve[index - 1][0], curve[index][0]
	while upper - lower > tol:
		middle = (lower + upper) / 2.0
		if power_at(middle) >= 0.5:
			lower = middle
		else:
			upper = middle
		logger.debug(f'Design sensitivity bracket [{lower:.4f}, {upper:.4f}]')

	estimate = DesignSensitivityEstimate(
		estimate=(lower + upper) / 2.0,
		lower=lower,
		upper=upper,
		method=method,
		theta=theta,
		n_sets=n_sets,
		reps=reps,
		mc_stderr=stderr,
		curve=curve,
	)
	logger.info(
		f'Design sensitivity of {method} at theta={theta}: {estimate.estimate:.4f} +- {estimate.half_width:.4f}'
	)
	return estimate
