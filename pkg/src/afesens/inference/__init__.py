"""Sensitivity bounds, P-value combination, attributable-effect inference and power."""

from .attributable import (
	AnalysisReport,
	HypothesisAllocation,
	max_ci_attributable,
	min_ci_attributable,
	sensitivity_grid,
	subtype_pvalues,
)
from .attributable import test_afe_zero, test_afe_zero_merged
from .bounds import (
	BernoulliBounds,
	SensParams,
	attributable_prob_bounds,
	gamma_theta_bounds,
	paired_upper_pvalue,
	pb_tail_exact,
	sign_score_bounds,
	tail_normal,
)
from .combiners import COMBINERS, MERGED, METHODS, combine
from .power import (
	DesignSensitivityEstimate,
	PowerPoint,
	PowerSpec,
	analytic_power,
	estimate_design_sensitivity,
	power_curve,
	simulate_power,
)

__all__ = [
	'AnalysisReport',
	'HypothesisAllocation',
	'SensParams',
	'BernoulliBounds',
	'PowerSpec',
	'PowerPoint',
	'DesignSensitivityEstimate',
	'MERGED',
	'COMBINERS',
	'METHODS',
	'sign_score_bounds',
	'gamma_theta_bounds',
	'attributable_prob_bounds',
	'pb_tail_exact',
	'tail_normal',
	'paired_upper_pvalue',
	'combine',
	'test_afe_zero',
	'test_afe_zero_merged',
	'subtype_pvalues',
	'min_ci_attributable',
	'max_ci_attributable',
	'sensitivity_grid',
	'analytic_power',
	'simulate_power',
	'power_curve',
	'estimate_design_sensitivity',
]
