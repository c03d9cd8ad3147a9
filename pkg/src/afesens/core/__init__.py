"""Core entities of the library."""

from .matched_set import MatchedSet
from .pair_counts import McNemarResult, OddsRatio, PairCounts
from .set_profile import SetProfile, Stratum
from .study import DEFAULT_LABEL, Study

__all__ = [
	'MatchedSet',
	'PairCounts',
	'OddsRatio',
	'McNemarResult',
	'SetProfile',
	'Stratum',
	'Study',
	'DEFAULT_LABEL',
]
