"""Monte Carlo harness: simulated case-referent data and rejection frequencies."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..core.pair_counts import PairCounts
from ..errors import ConfigError
from ..inference.attributable import test_afe_zero
from ..inference.bounds import SensParams
from ..inference.combiners import MERGED
from ..utils.workers import map_ordered, replicate_rng
from .config import DGPConfig, PairedDGPConfig

logger = logging.getLogger(__name__)

SUBTYPE_LABELS = ('subtype1', 'subtype2')


@dataclass(frozen=True)
class PowerRow:
	"""Rejection frequency of one method at one (Gamma, Theta).

	Attributes:
		delta1: Effect in the first subtype
		delta2: Effect in the second subtype
		gamma: Hidden-bias parameter
		theta: Selection-bias parameter
		method: Analysis method
		power: Fraction of replicates with upper-bound P-value <= alpha
		reps: Replicates
		seed: Master seed
	"""

	delta1: float
	delta2: float
	gamma: float
	theta: float
	method: str
	power: float
	reps: int
	seed: int

	@property
	def mc_stderr(self) -> float:
		"""Binomial Monte Carlo standard error of power."""
		return float(np.sqrt(self.power * (1.0 - self.power) / self.reps))


def _pair_cohort(config: DGPConfig, delta: float, rng: np.random.Generator) -> tuple[PairCounts, int]:
	"""Simulates one cohort and pairs its cases; returns counts and dropped cases."""
	n = config.n
	exposed = rng.random(n) < 0.5
	r_treated = rng.random(n) < config.baseline + delta
	r_control = rng.random(n) < config.baseline
	case = np.where(exposed, r_treated, r_control)

	cases = np.flatnonzero(case)
	non_cases = np.flatnonzero(~case)
	n_pairs = min(cases.size, non_cases.size)
	dropped = cases.size - n_pairs
	if dropped:
		cases = rng.permutation(cases)[:n_pairs]
	controls = rng.choice(non_cases, size=n_pairs, replace=False)

	case_z = exposed[cases]
	control_z = exposed[controls]
	counts = PairCounts(
		a=int(np.sum(case_z & control_z)),
		b=int(np.sum(case_z & ~control_z)),
		c=int(np.sum(~case_z & control_z)),
		d=int(np.sum(~case_z & ~control_z)),
	)
	return counts, dropped


def generate_dataset(config: DGPConfig, delta: float, rng: np.random.Generator) -> PairCounts:
	"""Simulates a cohort and summarizes its case-referent pairs.

	Each case is matched to a distinct, randomly chosen non-case. Cases left
	without a non-case are dropped.

	Args:
		config: Simulation config
		delta: Average exposure effect of this cohort
		rng: Random stream

	Returns:
		PairCounts of the formed pairs
	"""
	if not 0.0 <= config.baseline + delta <= 1.0:
		logger.error(f'Infeasible effect delta={delta} with baseline={config.baseline}')
		raise ConfigError(f'baseline + delta must lie in [0, 1], got {config.baseline + delta}')
	counts, dropped = _pair_cohort(config, delta, rng)
	if dropped:
		logger.warning(f'Dropped {dropped} cases without a distinct non-case')
	return counts


def generate_pairs(
	config: PairedDGPConfig, n_sets: int, rng: np.random.Generator
) -> dict[str, PairCounts]:
	"""Draws the 2 x 2 tables of a paired design with n_sets pairs.

	Args:
		config: Paired generator
		n_sets: Total number of pairs
		rng: Random stream

	Returns:
		Dictionary {group label: PairCounts}
	"""
	tables = {}
	remaining = n_sets
	for index, (label, group) in enumerate(zip(config.labels, config.groups, strict=True)):
		size = remaining if index == len(config.groups) - 1 else round(group.share * n_sets)
		remaining -= size
		discordant = int(rng.binomial(size, group.discordant_prob))
		b = int(rng.binomial(discordant, group.case_exposed_prob))
		tables[label] = PairCounts(a=0, b=b, c=discordant - b, d=size - discordant)
	return tables


def rejection_matrix(
	datasets: Sequence[Mapping[str, PairCounts]],
	params: Sequence[SensParams],
	methods: Sequence[str],
	alpha: float,
	trunc: float,
	workers: int | None = None,
) -> np.ndarray:
	"""Rejection indicators of every dataset at every (params, method).

	Args:
		datasets: Simulated tables, one mapping per replicate
		params: Sensitivity parameters to evaluate
		methods: Analysis methods
		alpha: Level; rejection means an upper-bound P-value <= alpha
		trunc: Truncation point of the truncated product
		workers: Worker count

	Returns:
		Boolean array of shape (replicates, len(params), len(methods))
	"""

	def evaluate(tables: Mapping[str, PairCounts]) -> np.ndarray:
		empty_group = any(table.n_pairs == 0 for table in tables.values())
		pooled = sum(table.n_pairs for table in tables.values())
		if empty_group:
			logger.debug(f'Replicate without pairs in some subtype: {tables}')

		def rejects(p: SensParams, method: str) -> bool:
			# merged pools the tables, so only an empty pooled table blocks it
			if pooled == 0 or (empty_group and method != MERGED):
				return False
			return test_afe_zero(tables, p, method, trunc=trunc) <= alpha

		return np.array([[rejects(p, method) for method in methods] for p in params], dtype=bool)

	return np.stack(map_ordered(evaluate, datasets, workers))


def run_power_study(
	config: DGPConfig,
	workers: int | None = None,
) -> list[PowerRow]:
	"""Rejection frequencies of each method over the (Gamma, Theta) grid.

	Replicate r draws both subtype cohorts from the stream seeded by
	(seed, r), so the table does not depend on the worker count.

	Args:
		config: Simulation config
		workers: Worker count (if None, from AFESENS_THREADS)

	Returns:
		Rows sorted by Gamma, Theta and method order
	"""
	gammas = sorted(config.gammas)
	thetas = sorted(config.thetas)
	grid = [SensParams(gamma=g, theta=t) for g in gammas for t in thetas]

	def replicate(index: int) -> tuple[dict[str, PairCounts], int]:
		rng = replicate_rng(config.seed, index)
		tables, dropped = {}, 0
		for label, delta in zip(SUBTYPE_LABELS, config.deltas, strict=True):
			tables[label], lost = _pair_cohort(config, delta, rng)
			dropped += lost
		return tables, dropped

	simulated = map_ordered(replicate, range(config.reps), workers)
	dropped = sum(lost for _, lost in simulated)
	if dropped:
		logger.warning(
			f'Dropped {dropped} simulated cases without a distinct non-case across {config.reps} replicates'
		)

	rejections = rejection_matrix(
		[tables for tables, _ in simulated],
		grid,
		config.methods,
		config.alpha,
		config.trunc,
		workers,
	)
	power = rejections.mean(axis=0)

	rows = [
		PowerRow(
			delta1=config.delta1,
			delta2=config.delta2,
			gamma=params.gamma,
			theta=params.theta,
			method=method,
			power=float(power[i, j]),
			reps=config.reps,
			seed=config.seed,
		)
		for i, params in enumerate(grid)
		for j, method in enumerate(config.methods)
	]
	logger.info(f'Power study finished: {config.reps} replicates, {len(rows)} rows')
	return rows
