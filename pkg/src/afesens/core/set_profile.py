"""SetProfile class: a study summarized by strata of interchangeable matched sets."""

import logging
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from ..errors import DomainError, StudyValidationError
from .matched_set import MatchedSet
from .pair_counts import PairCounts

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Stratum:
	"""Matched sets sharing size, exposure count and case exposure.

	Attributes:
		size: Set size J
		z_plus: Number of exposed units Z_{i+}
		case_exposed: Whether the case is exposed
		count: Number of sets in the stratum
	"""

	size: int
	z_plus: int
	case_exposed: bool
	count: int

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if self.size < 2 or not 0 <= self.z_plus <= self.size or self.count < 0:
			logger.error(f'Invalid stratum {self}')
			raise StudyValidationError(f'invalid stratum {self}')
		if self.case_exposed and self.z_plus == 0:
			raise StudyValidationError('an exposed case requires Z+ >= 1')
		if not self.case_exposed and self.z_plus == self.size:
			raise StudyValidationError('an unexposed case requires Z+ <= J - 1')

	@property
	def key(self) -> tuple[int, int, bool]:
		"""Stratum key without the count."""
		return (self.size, self.z_plus, self.case_exposed)


@dataclass(frozen=True)
class SetProfile:
	"""Exchangeable summary of matched sets.

	Every sensitivity bound depends on a set only through (J, Z+, case exposed),
	so analyses run on stratum counts instead of individual sets.

	Attributes:
		strata: Nonempty strata sorted by key
	"""

	strata: tuple[Stratum, ...]

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		keys = [s.key for s in self.strata]
		if len(keys) != len(set(keys)):
			raise StudyValidationError('duplicate strata in profile')

		logger.debug(f'Created profile with {self.n_sets} sets in {len(self.strata)} strata')

	@classmethod
	def from_counts(cls, counts: dict[tuple[int, int, bool], int]) -> 'SetProfile':
		"""Creates profile from {(J, Z+, case exposed): count}."""
		strata = tuple(
			sorted(
				Stratum(size, z_plus, bool(exposed), count)
				for (size, z_plus, exposed), count in counts.items()
				if count > 0
			)
		)
		return cls(strata=strata)

	@classmethod
	def from_sets(cls, sets: Iterable[MatchedSet]) -> 'SetProfile':
		"""Creates profile from matched sets."""
		counts = Counter((s.size, s.z_plus, s.case_exposed) for s in sets)
		return cls.from_counts(dict(counts))

	@classmethod
	def from_pair_counts(cls, pc: PairCounts) -> 'SetProfile':
		"""Creates profile of the 1:1 study summarized by a 2 x 2 table."""
		return cls.from_counts(
			{
				(2, 2, True): pc.a,
				(2, 1, True): pc.b,
				(2, 1, False): pc.c,
				(2, 0, False): pc.d,
			}
		)

	def __add__(self, other: 'SetProfile') -> 'SetProfile':
		"""Pools the sets of two profiles."""
		if not isinstance(other, SetProfile):
			return NotImplemented
		counts: Counter = Counter()
		for stratum in self.strata + other.strata:
			counts[stratum.key] += stratum.count
		return SetProfile.from_counts(dict(counts))

	def __iter__(self) -> Iterator[Stratum]:
		"""Iterates over strata."""
		return iter(self.strata)

	@property
	def n_sets(self) -> int:
		"""Number of matched sets I."""
		return sum(s.count for s in self.strata)

	@property
	def exposed_cases(self) -> int:
		"""Sign-score statistic T: number of exposed cases."""
		return sum(s.count for s in self.strata if s.case_exposed)

	def nulling_order(self) -> list[int]:
		"""Indices of exposed-case strata in the order attributable cases fill them.

		Sets with an unexposed unit (discordant for pairs) come first, fully
		exposed sets only after that capacity is exhausted.
		"""
		candidates = [i for i, s in enumerate(self.strata) if s.case_exposed]
		return sorted(
			candidates,
			key=lambda i: (
				self.strata[i].z_plus == self.strata[i].size,
				self.strata[i].z_plus / self.strata[i].size,
				i,
			),
		)

	def nulled_counts(self, attributable: int) -> list[int]:
		"""Number of sets per stratum whose case is attributed to exposure.

		Args:
			attributable: Hypothesized attributable effect A0 within the profile

		Returns:
			Nulled count per stratum (same order as strata)

		Raises:
			DomainError: If A0 is negative or exceeds the exposed cases
		"""
		if not 0 <= attributable <= self.exposed_cases:
			logger.error(
				f'Attributable effect {attributable} outside [0, {self.exposed_cases}]'
			)
			raise DomainError(
				f'attributable effect {attributable} exceeds {self.exposed_cases} exposed cases'
				if attributable > 0
				else f'attributable effect must be nonnegative, got {attributable}'
			)

		nulled = [0] * len(self.strata)
		remaining = attributable
		for i in self.nulling_order():
			take = min(remaining, self.strata[i].count)
			nulled[i] = take
			remaining -= take
			if remaining == 0:
				break
		return nulled
