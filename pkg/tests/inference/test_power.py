"""Tests for power formulas, their Monte Carlo check and design sensitivity."""

import math

import numpy as np
import pytest

from src.afesens.core.pair_counts import PairCounts
from src.afesens.errors import BracketError, ConfigError, DomainError
from src.afesens.inference.bounds import SensParams
from src.afesens.inference.power import (
	PowerSpec,
	analytic_power,
	estimate_design_sensitivity,
	power_curve,
	power_dominance_check,
	power_merged,
	power_spec_from_study,
	power_stouffer,
	power_weighted_stouffer,
	simulate_power,
)
from src.afesens.simulation.config import GroupDGP, PairedDGPConfig

MERGED_TABLE = PairCounts(a=2, b=101, c=64, d=3879)
SUBTYPES = {
	'hormone_sensitive': PairCounts(a=1, b=86, c=43, d=3024),
	'hormone_insensitive': PairCounts(a=1, b=15, c=21, d=855),
}

PINNED = [
	(
		'merged',
		PowerSpec(alpha=0.05, a_star=(120,), probabilities=(np.full(20_000, 0.5),)),
	),
	(
		'stouffer',
		PowerSpec(
			alpha=0.05,
			a_star=(50, 30),
			probabilities=(np.full(4000, 0.5), np.full(3000, 0.6)),
		),
	),
	(
		'weighted_stouffer',
		PowerSpec(
			alpha=0.05,
			a_star=(40, 25),
			probabilities=(
				np.concatenate([np.full(3000, 0.5), np.full(1000, 0.7)]),
				np.full(2000, 0.55),
			),
		),
	),
]


class TestPowerSpec:
	"""Tests for PowerSpec class."""

	def test_moments(self):
		"""Test means, variances and default weights."""
		spec = PowerSpec(0.05, (1, 2), (np.full(4, 0.5), np.full(9, 0.1)))
		assert spec.n_groups == 2
		assert spec.means == pytest.approx((2.0, 0.9))
		assert spec.variances == pytest.approx((1.0, 0.81))
		assert spec.group_weights == pytest.approx((2.0, 3.0))

	def test_merged(self):
		"""Test pooling of groups."""
		merged = PowerSpec(0.05, (1, 2), (np.full(4, 0.5), np.full(9, 0.1))).merged()
		assert merged.a_star == (3,)
		assert merged.probabilities[0].size == 13

	def test_invalid(self):
		"""Test invalid specs."""
		with pytest.raises(DomainError):
			PowerSpec(0.05, (1,), (np.full(2, 0.5), np.full(2, 0.5)))
		with pytest.raises(DomainError):
			PowerSpec(0.05, (-1,), (np.full(2, 0.5),))
		with pytest.raises(DomainError):
			PowerSpec(1.5, (1,), (np.full(2, 0.5),))
		with pytest.raises(DomainError):
			PowerSpec(0.05, (1,), (np.full(2, 1.5),))


class TestAnalyticPower:
	"""Tests for the analytic power formulas."""

	def test_case_study_power(self):
		"""Test power of 165 discordant pairs with a* = 17."""
		spec = power_spec_from_study(MERGED_TABLE, SensParams(), 17)
		assert power_merged(spec) == pytest.approx(0.843, abs=0.003)

	def test_no_effect_is_alpha(self):
		"""Test that a* = 0 gives power alpha."""
		spec = power_spec_from_study(MERGED_TABLE, SensParams(), 0)
		assert power_merged(spec) == pytest.approx(0.05)

	def test_zero_variance(self):
		"""Test degenerate probabilities."""
		spec = PowerSpec(0.05, (3,), (np.ones(5),))
		assert power_merged(spec) == 1.0
		assert power_merged(PowerSpec(0.05, (0,), (np.ones(5),))) == 0.0

	def test_stouffer_single_group_is_merged(self):
		"""Test that one group gives the merged power."""
		spec = PowerSpec(0.05, (12,), (np.full(300, 0.4),))
		assert power_stouffer(spec) == pytest.approx(power_merged(spec))
		assert power_weighted_stouffer(spec) == pytest.approx(power_merged(spec))

	def test_power_increases_with_effect(self):
		"""Test that power rises with the attributable effect."""
		powers = [
			analytic_power(power_spec_from_study(MERGED_TABLE, SensParams(1.1), a), 'merged')
			for a in (0, 5, 10, 20)
		]
		assert powers == sorted(powers)
		assert powers[0] == pytest.approx(0.05)

	def test_no_formula_for_fisher(self):
		"""Test methods without an analytic formula."""
		spec = PowerSpec(0.05, (1,), (np.full(2, 0.5),))
		with pytest.raises(ConfigError, match='no analytic power'):
			analytic_power(spec, 'fisher')

	def test_dominance(self):
		"""Test when the combined test beats the merged one."""
		probs = (np.full(400, 0.5), np.full(40_000, 0.5))
		concentrated_small = PowerSpec(0.05, (20, 0), probs)
		concentrated_large = PowerSpec(0.05, (0, 200), probs)

		assert power_dominance_check(concentrated_small.merged(), concentrated_small) is True
		assert power_dominance_check(concentrated_large.merged(), concentrated_large) is False

	def test_spec_from_study_combined(self):
		"""Test per-subtype spec construction."""
		spec = power_spec_from_study(SUBTYPES, SensParams(), (20, 3), combined=True)
		assert spec.a_star == (20, 3)
		assert [p.size for p in spec.probabilities] == [3154, 892]
		assert spec.group_weights == pytest.approx((math.sqrt(3154), math.sqrt(892)))


class TestSimulatedPower:
	"""Analytic power against Monte Carlo rejection frequencies."""

	@pytest.mark.parametrize('method, spec', PINNED)
	def test_within_three_standard_errors(self, method, spec):
		"""Test analytic power within 3 binomial SE of 10,000 replicates."""
		reps = 10_000
		analytic = analytic_power(spec, method)
		simulated = simulate_power(spec, method, reps=reps, seed=2024)
		stderr = math.sqrt(analytic * (1 - analytic) / reps)

		assert abs(simulated - analytic) <= 3 * stderr

	def test_deterministic_across_workers(self):
		"""Test identical estimates for one and four workers."""
		method, spec = PINNED[1]
		assert simulate_power(spec, method, 3000, seed=5, workers=1) == simulate_power(
			spec, method, 3000, seed=5, workers=4
		)

	def test_invalid(self):
		"""Test unsupported methods and replicate counts."""
		method, spec = PINNED[0]
		with pytest.raises(ConfigError):
			simulate_power(spec, 'bonferroni')
		with pytest.raises(ConfigError):
			simulate_power(spec, method, reps=0)


class TestPowerCurve:
	"""Tests for power_curve."""

	def test_analytic_curve(self):
		"""Test analytic points over a grid."""
		points = power_curve(MERGED_TABLE, [1.2, 1.0], [1.0, 1.1], a_star=17)
		assert [(p.gamma, p.theta) for p in points] == [
			(1.0, 1.0),
			(1.0, 1.1),
			(1.2, 1.0),
			(1.2, 1.1),
		]
		assert points[0].power == pytest.approx(0.843, abs=0.003)
		assert all(p.mc_stderr is None for p in points)

	def test_fixed_effect_power_rises_with_bias(self):
		"""Test that power at a fixed a* rises as Gamma or Theta grows."""
		points = power_curve(MERGED_TABLE, [1.0, 1.2, 1.5, 2.0], [1.0, 1.3], a_star=17)
		by_cell = {(p.gamma, p.theta): p.power for p in points}
		unbiased_theta = [by_cell[(g, 1.0)] for g in (1.0, 1.2, 1.5, 2.0)]
		assert unbiased_theta == pytest.approx([0.8418, 0.8445, 0.8547, 0.8775], abs=1e-3)
		assert unbiased_theta == sorted(unbiased_theta)
		assert by_cell[(1.0, 1.3)] == pytest.approx(0.8473, abs=1e-3)
		assert by_cell[(1.0, 1.3)] > by_cell[(1.0, 1.0)]

	def test_simulated_curve(self):
		"""Test Monte Carlo points carry a standard error."""
		points = power_curve(
			SUBTYPES, [1.0], a_star=(15, 2), methods=['stouffer'], reps=2000, seed=1
		)
		assert len(points) == 1
		assert points[0].mc_stderr == pytest.approx(
			math.sqrt(points[0].power * (1 - points[0].power) / 2000)
		)

	def test_rejects_fisher(self):
		"""Test methods without power formulas."""
		with pytest.raises(ConfigError):
			power_curve(MERGED_TABLE, [1.0], methods=['fisher'])


class TestDesignSensitivity:
	"""Tests for estimate_design_sensitivity."""

	def test_no_effect_returns_one(self):
		"""Test that a generator without effect has design sensitivity 1."""
		generator = PairedDGPConfig(groups=(GroupDGP(1.0, 1.0, 0.5),))
		estimate = estimate_design_sensitivity(generator, n_sets=10_000, reps=20, seed=3)

		assert estimate.estimate == 1.0
		assert estimate.lower == estimate.upper == 1.0

	def test_single_group_crossing(self):
		"""Test the finite-sample crossing of one group with p = 0.7."""
		generator = PairedDGPConfig(groups=(GroupDGP(1.0, 1.0, 0.7),))
		estimate = estimate_design_sensitivity(
			generator, n_sets=20_000, reps=40, tol=0.02, gamma_range=(1.0, 4.0), seed=11
		)

		assert estimate.estimate == pytest.approx(2.27, abs=0.05)
		assert estimate.upper - estimate.lower <= 0.02
		assert estimate.estimate < generator.groups[0].design_sensitivity
		powers = [p for _, p in estimate.curve]
		assert powers == sorted(powers, reverse=True)

	def test_combined_equals_larger_group(self):
		"""Test that Bonferroni inherits the larger per-group design sensitivity."""
		generator = PairedDGPConfig(
			groups=(GroupDGP(0.5, 1.0, 0.7, 'strong'), GroupDGP(0.5, 1.0, 0.6, 'weak'))
		)
		settings = {'reps': 40, 'tol': 0.02, 'gamma_range': (1.0, 4.0), 'seed': 17}
		combined = estimate_design_sensitivity(
			generator, method='bonferroni', n_sets=20_000, **settings
		)
		per_group = [
			estimate_design_sensitivity(generator.only(i), n_sets=10_000, **settings)
			for i in range(2)
		]

		assert per_group[0].estimate > per_group[1].estimate
		assert abs(combined.estimate - max(e.estimate for e in per_group)) <= 0.05

	def test_deterministic(self):
		"""Test identical estimates for the same seed and any worker count."""
		generator = PairedDGPConfig(groups=(GroupDGP(1.0, 0.5, 0.65),))
		args = {'n_sets': 10_000, 'reps': 10, 'gamma_range': (1.0, 3.0), 'seed': 4}
		first = estimate_design_sensitivity(generator, workers=1, **args)
		second = estimate_design_sensitivity(generator, workers=3, **args)
		assert first == second

	def test_bracket_error(self):
		"""Test that power above 0.5 at the top of the range is reported."""
		generator = PairedDGPConfig(groups=(GroupDGP(1.0, 1.0, 0.9),))
		with pytest.raises(BracketError, match='widen the gamma range'):
			estimate_design_sensitivity(
				generator, n_sets=10_000, reps=5, gamma_range=(1.0, 2.0), seed=1
			)

	def test_small_study_rejected(self):
		"""Test that design sensitivity needs large studies."""
		generator = PairedDGPConfig(groups=(GroupDGP(1.0, 1.0, 0.7),))
		with pytest.raises(ConfigError, match='at least 10000'):
			estimate_design_sensitivity(generator, n_sets=500)
