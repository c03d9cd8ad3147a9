"""Tests and confidence intervals for the attributable effect among exposed cases.

A hypothesis about the attributable effect nulls some exposed cases: those
cases would not have occurred without exposure, so their sets drop out of
the adjusted sign score. Inverting the test of each hypothesis A0 = 0, 1, ...
gives a one-sided confidence interval for the attributable effect, reported
as a lower bound on the attributable fraction among the exposed.
"""

import logging
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from ..core.pair_counts import PairCounts
from ..core.set_profile import SetProfile
from ..core.study import DEFAULT_LABEL, Study
from ..errors import DomainError, StudyValidationError
from ..utils.workers import map_ordered
from .bounds import SensParams, attributable_prob_bounds, pb_tail_exact, tail_normal
from .combiners import MERGED, check_method, combine

logger = logging.getLogger(__name__)

StudyData = Study | PairCounts | Mapping[str, PairCounts]

FIRST_FAIL = 'first_fail'
LAST_REJECT = 'last_reject'


@dataclass(frozen=True)
class HypothesisAllocation:
	"""Attributable cases per subtype.

	Attributes:
		counts: Attributable cases a^(k) per subtype
		capacities: Exposed cases per subtype
	"""

	counts: tuple[int, ...]
	capacities: tuple[int, ...]

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if len(self.counts) != len(self.capacities):
			raise DomainError(
				f'{len(self.counts)} attributable counts for {len(self.capacities)} subtypes'
			)
		for count, capacity in zip(self.counts, self.capacities, strict=True):
			if not 0 <= count <= capacity:
				logger.error(f'Allocation {self.counts} exceeds capacities {self.capacities}')
				raise DomainError(
					f'attributable count {count} outside [0, {capacity}] exposed cases'
				)

	@property
	def total(self) -> int:
		"""Total attributable effect A0."""
		return sum(self.counts)

	@classmethod
	def compositions(cls, total: int, capacities: Sequence[int]) -> Iterator['HypothesisAllocation']:
		"""Enumerates every allocation of total attributable cases."""
		capacities = tuple(capacities)
		for counts in _compositions(total, capacities):
			yield cls(counts=counts, capacities=capacities)


def _compositions(total: int, capacities: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
	if len(capacities) == 1:
		if total <= capacities[0]:
			yield (total,)
		return
	rest_capacity = sum(capacities[1:])
	for first in range(max(0, total - rest_capacity), min(total, capacities[0]) + 1):
		for rest in _compositions(total - first, capacities[1:]):
			yield (first, *rest)


@dataclass(frozen=True)
class AnalysisReport:
	"""Result of one sensitivity analysis.

	Attributes:
		method: Analysis method (merged or a combiner)
		gamma: Hidden-bias parameter
		theta: Selection-bias parameter
		alpha: Test level
		p_value: Upper-bound P-value for no attributable effect
		a_star: Minimum attributable effect a*
		exposed_cases: Exposed cases T
		saturated: Whether the scan reached the exposed-case capacity
		allocation: Per-subtype split of a* (combined methods)
		a_max: Maximum attributable effect (optional)
		boundary_flag: Grid boundary marker (first_fail or last_reject)
	"""

	method: str
	gamma: float
	theta: float
	alpha: float
	p_value: float
	a_star: int
	exposed_cases: int
	saturated: bool = False
	allocation: tuple[int, ...] | None = None
	a_max: int | None = None
	boundary_flag: str | None = None

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not 0 <= self.a_star <= self.exposed_cases:
			raise DomainError(f'a*={self.a_star} outside [0, {self.exposed_cases}]')

	@property
	def rejects(self) -> bool:
		"""Whether no attributable effect is rejected at level alpha."""
		return bool(self.p_value < self.alpha)

	@property
	def afe_lower(self) -> float:
		"""Lower bound on the attributable fraction among the exposed."""
		return self.a_star / self.exposed_cases if self.exposed_cases else 0.0

	@property
	def afe_upper(self) -> float | None:
		"""Upper bound on the attributable fraction (when a_max is known)."""
		if self.a_max is None:
			return None
		return self.a_max / self.exposed_cases if self.exposed_cases else 0.0


@dataclass
class StudyDesign:
	"""Profiles of the merged study and of each subtype."""

	merged: SetProfile
	labels: tuple[str, ...]
	groups_source: Study | Mapping[str, PairCounts] | None = field(repr=False)

	@cached_property
	def groups(self) -> list[SetProfile]:
		if isinstance(self.groups_source, Study):
			return [profile for _, profile in self.groups_source.subtype_profiles()]
		if self.groups_source is None:
			return [self.merged]
		return [SetProfile.from_pair_counts(pc) for pc in self.groups_source.values()]

	@cached_property
	def weights(self) -> list[float]:
		return [math.sqrt(profile.n_sets) for profile in self.groups]


def as_design(data: 'StudyData | StudyDesign') -> StudyDesign:
	"""Resolves study data into merged and per-subtype profiles.

	Args:
		data: Study, one 2 x 2 table, {subtype: table} or a resolved design

	Returns:
		StudyDesign object
	"""
	if isinstance(data, StudyDesign):
		return data
	if isinstance(data, Study):
		return StudyDesign(merged=data.profile, labels=data.subtype_labels, groups_source=data)
	if isinstance(data, PairCounts):
		return StudyDesign(
			merged=SetProfile.from_pair_counts(data),
			labels=(DEFAULT_LABEL,),
			groups_source=None,
		)
	if isinstance(data, Mapping) and data:
		tables = list(data.values())
		merged = tables[0]
		for table in tables[1:]:
			merged = merged + table
		return StudyDesign(
			merged=SetProfile.from_pair_counts(merged),
			labels=tuple(str(label) for label in data),
			groups_source=data,
		)
	logger.error(f'Unsupported study data {type(data).__name__}')
	raise StudyValidationError('expected a Study, a PairCounts or a nonempty mapping of them')


def set_probabilities(
	profile: SetProfile, params: SensParams, attributable: int = 0, upper: bool = True
) -> np.ndarray:
	"""Per-set success probabilities under a hypothesized attributable effect.

	Args:
		profile: Strata of the analyzed sets
		params: Sensitivity parameters
		attributable: Hypothesized attributable effect A0
		upper: Upper bounds if True, lower bounds otherwise

	Returns:
		Array with one probability per matched set
	"""
	nulled = profile.nulled_counts(attributable)
	values, counts = [], []
	for stratum, k in zip(profile, nulled, strict=True):
		bounds = attributable_prob_bounds(stratum.z_plus, 1, stratum.size, params)
		values.extend([bounds.upper if upper else bounds.lower, 0.0])
		counts.extend([stratum.count - k, k])
	return np.repeat(np.asarray(values, dtype=float), counts)


def _profile_pvalue(
	profile: SetProfile,
	params: SensParams,
	attributable: int = 0,
	exact: bool = False,
	upper: bool = True,
) -> float:
	if profile.n_sets == 0:
		logger.error('Test requested on a group without matched sets')
		raise StudyValidationError('cannot test a group with no matched sets')

	probs = set_probabilities(profile, params, attributable, upper)
	t = profile.exposed_cases
	if exact:
		return pb_tail_exact(probs, t - attributable)
	return tail_normal(t, attributable, probs)


def test_afe_zero_merged(data: StudyData, params: SensParams, exact: bool = False) -> float:
	"""Upper-bound P-value for no attributable effect on the merged study.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		exact: Use the exact Poisson-binomial tail instead of the normal one

	Returns:
		Upper-bound P-value
	"""
	design = as_design(data)
	return _profile_pvalue(design.merged, params, 0, exact)


test_afe_zero_merged.__test__ = False


def subtype_pvalues(
	data: StudyData,
	params: SensParams,
	allocation: Sequence[int] | None = None,
	exact: bool = False,
) -> list[float]:
	"""Upper-bound P-values of each subtype at given attributable counts.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		allocation: Attributable cases per subtype (zeros if None)
		exact: Use the exact Poisson-binomial tail

	Returns:
		One P-value per subtype, ordered by subtype label
	"""
	design = as_design(data)
	counts = list(allocation) if allocation is not None else [0] * len(design.groups)
	HypothesisAllocation(
		counts=tuple(counts),
		capacities=tuple(profile.exposed_cases for profile in design.groups),
	)
	return [
		_profile_pvalue(profile, params, a, exact)
		for profile, a in zip(design.groups, counts, strict=True)
	]


def test_afe_zero(
	data: StudyData,
	params: SensParams,
	method: str = MERGED,
	exact: bool = False,
	trunc: float = 0.10,
) -> float:
	"""Upper-bound P-value for no attributable effect with any method.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		method: merged or one of the P-value combiners
		exact: Use the exact Poisson-binomial tail
		trunc: Truncation point for the truncated product

	Returns:
		Upper-bound P-value
	"""
	design = as_design(data)
	if method == MERGED:
		return _profile_pvalue(design.merged, params, 0, exact)
	ps = subtype_pvalues(design, params, exact=exact)
	return combine(method, ps, design.weights, trunc)


test_afe_zero.__test__ = False


def _check_alpha(alpha: float) -> None:
	if not 0.0 < alpha <= 0.5:
		logger.error(f'Invalid level alpha={alpha}')
		raise DomainError(f'alpha must lie in (0, 0.5], got {alpha}')


def min_ci_attributable(
	data: StudyData,
	params: SensParams,
	alpha: float = 0.05,
	method: str = MERGED,
	trunc: float = 0.10,
	exact: bool = False,
) -> AnalysisReport:
	"""Minimum attributable effect a* by test inversion.

	Scans A0 = 0, 1, ... and stops at the first A0 whose upper-bound P-value
	is at least alpha. For combined methods, the P-value of a total A0 is the
	maximum over every split of A0 across subtypes.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		alpha: Test level in (0, 0.5]
		method: merged or one of the P-value combiners
		trunc: Truncation point for the truncated product
		exact: Use the exact Poisson-binomial tail

	Returns:
		AnalysisReport with a* and the P-value at A0 = 0
	"""
	_check_alpha(alpha)
	design = as_design(data)
	check_method(method)

	if method == MERGED:
		profile = design.merged
		capacity = profile.exposed_cases
		p_zero = _profile_pvalue(profile, params, 0, exact)
		a_star, allocation = capacity, None
		for a0 in range(capacity):
			p = p_zero if a0 == 0 else _profile_pvalue(profile, params, a0, exact)
			logger.debug(f'merged A0={a0}: p={p:.6g}')
			if p >= alpha:
				a_star = a0
				break
	else:
		capacities = tuple(profile.exposed_cases for profile in design.groups)
		tables = [
			[_profile_pvalue(profile, params, a, exact) for a in range(cap + 1)]
			for profile, cap in zip(design.groups, capacities, strict=True)
		]
		capacity = sum(capacities)
		p_zero = combine(method, [table[0] for table in tables], design.weights, trunc)
		a_star, allocation = capacity, capacities
		for a0 in range(capacity):
			best, best_counts = -1.0, None
			for candidate in HypothesisAllocation.compositions(a0, capacities):
				ps = [table[a] for table, a in zip(tables, candidate.counts, strict=True)]
				p = combine(method, ps, design.weights, trunc)
				if p > best:
					best, best_counts = p, candidate.counts
			logger.debug(f'{method} A0={a0}: max p={best:.6g} at {best_counts}')
			if best >= alpha:
				a_star, allocation = a0, best_counts
				break

	saturated = capacity > 0 and a_star == capacity
	if saturated:
		logger.warning(
			f'{method} scan reached capacity {capacity} at gamma={params.gamma}, theta={params.theta}'
		)

	report = AnalysisReport(
		method=method,
		gamma=params.gamma,
		theta=params.theta,
		alpha=alpha,
		p_value=p_zero,
		a_star=a_star,
		exposed_cases=capacity,
		saturated=saturated,
		allocation=allocation,
	)
	logger.debug(
		f'{method} gamma={params.gamma} theta={params.theta}: a*={a_star}, p0={p_zero:.6g}'
	)
	return report


def max_ci_attributable(
	data: StudyData, params: SensParams, alpha: float = 0.05, exact: bool = False
) -> int:
	"""Upper end of the one-sided maximum confidence interval for the attributable effect.

	Uses the lower-bound probabilities and increases A0 while the lower-bound
	P-value is below 1 - alpha.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		params: Sensitivity parameters
		alpha: Test level in (0, 0.5]
		exact: Use the exact Poisson-binomial tail

	Returns:
		Maximum attributable effect (the capacity when no A0 is accepted)
	"""
	_check_alpha(alpha)
	profile = as_design(data).merged
	capacity = profile.exposed_cases
	for a0 in range(capacity + 1):
		p_lower = _profile_pvalue(profile, params, a0, exact, upper=False)
		if p_lower >= 1.0 - alpha:
			return a0

	logger.warning(f'Maximum interval scan reached capacity {capacity}')
	return capacity


def sensitivity_grid(
	data: StudyData,
	gammas: Sequence[float],
	thetas: Sequence[float] = (1.0,),
	methods: Sequence[str] = (MERGED,),
	alpha: float = 0.05,
	trunc: float = 0.10,
	exact: bool = False,
	include_max: bool = False,
	workers: int | None = None,
) -> list[AnalysisReport]:
	"""Sensitivity analyses over a grid of (Gamma, Theta, method).

	Cells are evaluated concurrently. For each method and Theta, the
	smallest grid Gamma at which no attributable effect is no longer rejected
	is flagged first_fail and the grid Gamma just below it last_reject.

	Args:
		data: Study, one 2 x 2 table or {subtype: table}
		gammas: Gamma grid
		thetas: Theta grid
		methods: Methods to run
		alpha: Test level
		trunc: Truncation point for the truncated product
		exact: Use the exact Poisson-binomial tail
		include_max: Also compute the maximum attributable effect (merged bounds)
		workers: Worker count (if None, from AFESENS_THREADS)

	Returns:
		Reports sorted by Gamma, Theta and method order
	"""
	if not gammas or not thetas or not methods:
		raise DomainError('gamma, theta and method lists must be nonempty')
	_check_alpha(alpha)
	for method in methods:
		check_method(method)

	design = as_design(data)
	gammas = sorted(set(float(g) for g in gammas))
	thetas = sorted(set(float(t) for t in thetas))
	methods = list(dict.fromkeys(methods))

	cells = [
		(SensParams(gamma=g, theta=t), method)
		for g in gammas
		for t in thetas
		for method in methods
	]

	def run_cell(cell: tuple[SensParams, str]) -> AnalysisReport:
		params, method = cell
		report = min_ci_attributable(design, params, alpha, method, trunc, exact)
		if include_max:
			report = replace(report, a_max=max_ci_attributable(design, params, alpha, exact))
		return report

	reports = map_ordered(run_cell, cells, workers)
	reports = _flag_boundaries(reports)
	logger.info(
		f'Evaluated {len(reports)} grid cells ({len(gammas)} gamma x {len(thetas)} theta x {len(methods)} methods)'
	)
	return reports


def _flag_boundaries(reports: list[AnalysisReport]) -> list[AnalysisReport]:
	flagged = list(reports)
	series: dict[tuple[str, float], list[int]] = {}
	for index, report in enumerate(reports):
		series.setdefault((report.method, report.theta), []).append(index)

	for indices in series.values():
		indices.sort(key=lambda i: reports[i].gamma)
		for position, index in enumerate(indices):
			if reports[index].rejects:
				continue
			flagged[index] = replace(reports[index], boundary_flag=FIRST_FAIL)
			if position > 0:
				previous = indices[position - 1]
				flagged[previous] = replace(reports[previous], boundary_flag=LAST_REJECT)
			break
	return flagged
