"""Tests for MatchedSet."""

import pytest

from src.afesens.core.matched_set import MatchedSet
from src.afesens.errors import StudyValidationError


class TestMatchedSet:
	"""Tests for MatchedSet class."""

	def test_pair_properties(self):
		"""Test properties of a discordant pair with an exposed case."""
		matched_set = MatchedSet(set_id='s1', z=(1, 0), r=(1, 0), subtype='hs')

		assert matched_set.size == 2
		assert matched_set.z_plus == 1
		assert matched_set.case_index == 0
		assert matched_set.case_exposed is True
		assert matched_set.is_discordant is True

	def test_case_not_first(self):
		"""Test case position other than the first unit."""
		matched_set = MatchedSet(set_id='s2', z=(1, 0, 0), r=(0, 0, 1))

		assert matched_set.case_index == 2
		assert matched_set.case_exposed is False
		assert matched_set.size == 3

	def test_concordant_set(self):
		"""Test that fully exposed and fully unexposed sets are concordant."""
		assert MatchedSet('a', (1, 1), (1, 0)).is_discordant is False
		assert MatchedSet('d', (0, 0), (0, 1)).is_discordant is False

	def test_two_cases_rejected(self):
		"""Test that a set with two cases is rejected."""
		with pytest.raises(StudyValidationError, match='set s3: set has 2 cases'):
			MatchedSet(set_id='s3', z=(1, 0), r=(1, 1))

	def test_no_case_rejected(self):
		"""Test that a set without a case is rejected."""
		with pytest.raises(StudyValidationError, match='0 cases'):
			MatchedSet(set_id='s4', z=(1, 0), r=(0, 0))

	def test_single_unit_rejected(self):
		"""Test that a set needs at least two units."""
		with pytest.raises(StudyValidationError, match='at least 2 units'):
			MatchedSet(set_id='s5', z=(1,), r=(1,))

	def test_length_mismatch_rejected(self):
		"""Test that exposure and case vectors must have equal length."""
		with pytest.raises(StudyValidationError, match='differ in length'):
			MatchedSet(set_id='s6', z=(1, 0, 0), r=(1, 0))

	def test_non_binary_rejected(self):
		"""Test that entries must be 0 or 1."""
		with pytest.raises(StudyValidationError, match='0 or 1'):
			MatchedSet(set_id='s7', z=(2, 0), r=(1, 0))
