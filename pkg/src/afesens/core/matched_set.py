"""MatchedSet class for representing one matched set of a case-referent study."""

import logging
from dataclasses import dataclass

from ..errors import StudyValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchedSet:
	"""Represents one matched set: a case and its J - 1 referents.

	Attributes:
		set_id: Set identifier
		z: Exposure indicator per unit (0 or 1)
		r: Observed case indicator per unit (0 or 1)
		subtype: Subtype label of the set's case (optional)
	"""

	set_id: str
	z: tuple[int, ...]
	r: tuple[int, ...]
	subtype: str | None = None

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if len(self.z) != len(self.r):
			logger.error(
				f'Set {self.set_id}: {len(self.z)} exposure flags vs {len(self.r)} case flags'
			)
			raise StudyValidationError(
				f'set {self.set_id}: exposure and case vectors differ in length'
			)
		if len(self.z) < 2:
			logger.error(f'Set {self.set_id} has {len(self.z)} unit(s)')
			raise StudyValidationError(f'set {self.set_id} must contain at least 2 units')
		if any(v not in (0, 1) for v in self.z + self.r):
			logger.error(f'Set {self.set_id} has non-binary entries')
			raise StudyValidationError(f'set {self.set_id}: entries must be 0 or 1')

		cases = sum(self.r)
		if cases != 1:
			logger.error(f'Set {self.set_id} has {cases} cases')
			raise StudyValidationError(f'set {self.set_id}: set has {cases} cases')

	@property
	def size(self) -> int:
		"""Number of units J in the set."""
		return len(self.z)

	@property
	def z_plus(self) -> int:
		"""Number of exposed units Z_{i+}."""
		return sum(self.z)

	@property
	def case_index(self) -> int:
		"""Position of the case within the set."""
		return self.r.index(1)

	@property
	def case_exposed(self) -> bool:
		"""Whether the case is exposed."""
		return self.z[self.case_index] == 1

	@property
	def is_discordant(self) -> bool:
		"""Whether exposure varies within the set."""
		return 0 < self.z_plus < self.size
