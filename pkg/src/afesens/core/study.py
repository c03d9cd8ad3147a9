"""Study class for representing a matched case-referent study."""

import csv
import io
import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from ..errors import StudyValidationError
from .matched_set import MatchedSet
from .pair_counts import PairCounts
from .set_profile import SetProfile

logger = logging.getLogger(__name__)

DEFAULT_LABEL = 'all'
STUDY_HEADER = ('set_id', 'unit_id', 'exposed', 'case', 'subtype')

# Unit exposures (case first) for each cell of the 2 x 2 table
_PAIR_CELLS = {'a': (1, 1), 'b': (1, 0), 'c': (0, 1), 'd': (0, 0)}


@dataclass(frozen=True)
class Study:
	"""Represents a matched case-referent study.

	Attributes:
		sets: Matched sets in input order
		subtype_labels: Declared case-subtype labels (partition keys)
	"""

	sets: tuple[MatchedSet, ...]
	subtype_labels: tuple[str, ...] = (DEFAULT_LABEL,)

	def __post_init__(self) -> None:
		"""Validate data after initialization."""
		if not self.subtype_labels:
			logger.error('Study declares no subtype labels')
			raise StudyValidationError('study must declare at least one subtype label')
		if len(set(self.subtype_labels)) != len(self.subtype_labels):
			raise StudyValidationError(f'duplicate subtype labels: {self.subtype_labels}')

		seen: set[str] = set()
		declared = set(self.subtype_labels)
		for matched_set in self.sets:
			if matched_set.set_id in seen:
				logger.error(f'Duplicate set_id {matched_set.set_id}')
				raise StudyValidationError(f'duplicate set_id {matched_set.set_id}')
			seen.add(matched_set.set_id)
			if matched_set.subtype is not None and matched_set.subtype not in declared:
				logger.error(
					f'Set {matched_set.set_id} has undeclared subtype {matched_set.subtype!r}'
				)
				raise StudyValidationError(
					f'set {matched_set.set_id}: unknown subtype label {matched_set.subtype!r}'
				)

		logger.debug(
			f'Created study with {len(self.sets)} sets and labels {self.subtype_labels}'
		)

	@classmethod
	def from_pair_counts(
		cls, tables: Mapping[str | None, PairCounts] | PairCounts
	) -> 'Study':
		"""Reconstructs a 1:1 study from 2 x 2 summary tables.

		Args:
			tables: A single table, or {subtype label: table}; a None label
				produces unlabeled sets

		Returns:
			Study with one synthetic pair per counted pair
		"""
		if isinstance(tables, PairCounts):
			tables = {None: tables}

		sets = []
		for label, counts in tables.items():
			prefix = f'{label}-' if label is not None else ''
			serial = 0
			for cell, (case_z, control_z) in _PAIR_CELLS.items():
				for _ in range(getattr(counts, cell)):
					serial += 1
					sets.append(
						MatchedSet(
							set_id=f'{prefix}{serial}',
							z=(case_z, control_z),
							r=(1, 0),
							subtype=label,
						)
					)

		labels = tuple(label for label in tables if label is not None)
		study = cls(sets=tuple(sets), subtype_labels=labels or (DEFAULT_LABEL,))
		logger.info(f'Reconstructed {study.n_sets} pairs from {len(tables)} table(s)')
		return study

	def __iter__(self) -> Iterator[MatchedSet]:
		"""Iterates over matched sets."""
		return iter(self.sets)

	def __len__(self) -> int:
		"""Number of matched sets."""
		return len(self.sets)

	@property
	def n_sets(self) -> int:
		"""Number of matched sets I."""
		return len(self.sets)

	@property
	def n_units(self) -> int:
		"""Total number of units N."""
		return sum(s.size for s in self.sets)

	@property
	def exposed_cases(self) -> int:
		"""Number of exposed cases T."""
		return sum(1 for s in self.sets if s.case_exposed)

	@property
	def is_labeled(self) -> bool:
		"""Whether every set carries a subtype label."""
		return all(s.subtype is not None for s in self.sets)

	@cached_property
	def profile(self) -> SetProfile:
		"""Strata summary of all sets."""
		return SetProfile.from_sets(self.sets)

	def get_set(self, set_id: str) -> MatchedSet | None:
		"""Gets matched set by identifier.

		Args:
			set_id: Set identifier

		Returns:
			MatchedSet or None if not found
		"""
		for matched_set in self.sets:
			if matched_set.set_id == set_id:
				return matched_set
		return None

	def summarize_pairs(self, subtype: str | None = None) -> PairCounts:
		"""Summarizes 1:1 matched pairs as a 2 x 2 table.

		Args:
			subtype: Restrict to sets with this case subtype (None for all)

		Returns:
			PairCounts of the (filtered) pairs

		Raises:
			StudyValidationError: If a set is not a pair or the label is unknown
		"""
		if subtype is not None and subtype not in self.subtype_labels:
			raise StudyValidationError(f'unknown subtype label {subtype!r}')

		cells = dict.fromkeys(_PAIR_CELLS, 0)
		by_exposure = {value: cell for cell, value in _PAIR_CELLS.items()}
		for matched_set in self.sets:
			if subtype is not None and matched_set.subtype != subtype:
				continue
			if matched_set.size != 2:
				logger.error(f'Set {matched_set.set_id} has {matched_set.size} units')
				raise StudyValidationError(
					f'pair summary requires 1:1 matching (set {matched_set.set_id} has J={matched_set.size})'
				)
			case = matched_set.case_index
			key = (matched_set.z[case], matched_set.z[1 - case])
			cells[by_exposure[key]] += 1

		return PairCounts(**cells)

	def partition_by_subtype(self) -> list[tuple[str, 'Study']]:
		"""Splits the study into one view per declared subtype label.

		Returns:
			List of (label, Study) ordered by subtype_labels

		Raises:
			StudyValidationError: If a set is unlabeled in a multi-label study
		"""
		unlabeled = [s.set_id for s in self.sets if s.subtype is None]
		if unlabeled:
			if len(self.subtype_labels) == 1 and len(unlabeled) == len(self.sets):
				return [(self.subtype_labels[0], self)]
			logger.error(f'{len(unlabeled)} unlabeled sets, first {unlabeled[0]}')
			raise StudyValidationError(
				f'set {unlabeled[0]} has no subtype label; cannot partition by subtype'
			)

		views = []
		for label in self.subtype_labels:
			subset = tuple(s for s in self.sets if s.subtype == label)
			views.append((label, Study(sets=subset, subtype_labels=self.subtype_labels)))
		return views

	def subtype_profiles(self) -> list[tuple[str, SetProfile]]:
		"""Strata summaries of each subtype view."""
		return [(label, view.profile) for label, view in self.partition_by_subtype()]

	def to_csv(self) -> str:
		"""Serializes the study to the long CSV format."""
		buffer = io.StringIO()
		writer = csv.writer(buffer, lineterminator='\n')
		writer.writerow(STUDY_HEADER)
		for matched_set in self.sets:
			case = matched_set.case_index
			for j, (z, r) in enumerate(zip(matched_set.z, matched_set.r, strict=True)):
				label = matched_set.subtype if j == case and matched_set.subtype else ''
				writer.writerow((matched_set.set_id, j + 1, z, r, label))
		return buffer.getvalue()
