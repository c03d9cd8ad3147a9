"""Tests for BaseParser."""

import pytest

from src.afesens.core.pair_counts import PairCounts
from src.afesens.core.study import DEFAULT_LABEL
from src.afesens.errors import StudyParseError, StudyValidationError
from src.afesens.parsers.base_parser import BaseParser


class ConcreteParser(BaseParser):
	"""Concrete implementation of BaseParser for testing."""

	def parse(self, data):
		"""Parses a list of rows."""
		return self._rows_to_study(data)

	def parse_summary(self, data):
		"""Parses a list of summary rows."""
		return self._rows_to_summary(data)


HEADER = ['set_id', 'unit_id', 'exposed', 'case', 'subtype']


class TestBaseParser:
	"""Tests for BaseParser class."""

	def test_base_parser_creation(self):
		"""Test base parser creation."""
		parser = ConcreteParser()
		assert parser.subtype_labels is None
		assert ConcreteParser(['hs', 'hi']).subtype_labels == ('hs', 'hi')

	def test_clean_cell_value(self):
		"""Test cleaning cell values."""
		parser = ConcreteParser()
		assert parser._clean_cell_value(None) is None
		assert parser._clean_cell_value('  test  ') == 'test'
		assert parser._clean_cell_value('   ') is None
		assert parser._clean_cell_value(42) == 42

	def test_detect_encoding_ascii_is_utf8(self):
		"""Test that plain ASCII data is read as utf-8."""
		parser = ConcreteParser()
		assert parser._detect_encoding(b'subtype,a,b,c,d\n') == 'utf-8'

	def test_long_layout(self):
		"""Test building a study from long-layout rows."""
		rows = [
			HEADER,
			['1', '1', '1', '1', 'hs'],
			['1', '2', '0', '0', None],
			['2', '1', '0', '1', 'hi'],
			['2', '2', '1', '0', None],
			['2', '3', '0', '0', None],
		]
		study = ConcreteParser().parse(rows)

		assert study.subtype_labels == ('hs', 'hi')
		assert study.n_sets == 2
		assert study.get_set('2').size == 3
		assert study.get_set('2').subtype == 'hi'
		assert study.exposed_cases == 1

	def test_long_layout_without_subtype_column(self):
		"""Test four-column long layout."""
		rows = [HEADER[:4], ['a', '1', 'yes', 'true'], ['a', '2', 'no', 'false']]
		study = ConcreteParser().parse(rows)

		assert study.subtype_labels == (DEFAULT_LABEL,)
		assert study.exposed_cases == 1

	def test_declared_labels_keep_order(self):
		"""Test that declared labels override the order of appearance."""
		rows = [
			HEADER,
			['1', '1', '1', '1', 'hs'],
			['1', '2', '0', '0', None],
		]
		study = ConcreteParser(['hi', 'hs']).parse(rows)

		assert study.subtype_labels == ('hi', 'hs')

	def test_undeclared_label_rejected(self):
		"""Test that a label outside the declared ones is rejected."""
		rows = [HEADER, ['1', '1', '1', '1', 'xx'], ['1', '2', '0', '0', None]]
		with pytest.raises(StudyValidationError, match='unknown subtype label'):
			ConcreteParser(['hs']).parse(rows)

	def test_bad_indicator_reports_line(self):
		"""Test that a non-binary indicator names its line."""
		rows = [HEADER, ['1', '1', '1', '1', 'hs'], ['1', '2', '2', '0', None]]
		with pytest.raises(StudyParseError, match='line 3') as excinfo:
			ConcreteParser().parse(rows)
		assert excinfo.value.line == 3

	def test_duplicate_unit_rejected(self):
		"""Test that a unit_id may appear once per set."""
		rows = [HEADER, ['1', '1', '1', '1', 'hs'], ['1', '1', '0', '0', None]]
		with pytest.raises(StudyParseError, match='duplicate unit_id'):
			ConcreteParser().parse(rows)

	def test_set_with_two_cases_rejected(self):
		"""Test that set validation names the offending set."""
		rows = [HEADER, ['s9', '1', '1', '1', 'hs'], ['s9', '2', '0', '1', None]]
		with pytest.raises(StudyValidationError, match='set s9'):
			ConcreteParser().parse(rows)

	def test_unknown_header_rejected(self):
		"""Test that an unrecognized header is rejected at line 1."""
		with pytest.raises(StudyParseError, match='line 1'):
			ConcreteParser().parse([['id', 'x'], ['1', '2']])

	def test_empty_input_rejected(self):
		"""Test that input without a header is rejected."""
		with pytest.raises(StudyParseError, match='header row is required'):
			ConcreteParser().parse([])

	def test_summary_layout(self):
		"""Test summary rows."""
		rows = [
			['subtype', 'a', 'b', 'c', 'd'],
			['hs', '1', '86', '43', '3024'],
			['hi', 1, 15, 21, 855],
		]
		tables = ConcreteParser().parse_summary(rows)

		assert tables == {'hs': PairCounts(1, 86, 43, 3024), 'hi': PairCounts(1, 15, 21, 855)}

	def test_summary_layout_builds_study(self):
		"""Test that _rows_to_study accepts the summary layout."""
		rows = [['subtype', 'a', 'b', 'c', 'd'], ['hs', '0', '2', '1', '0']]
		study = ConcreteParser().parse(rows)

		assert study.n_sets == 3
		assert study.subtype_labels == ('hs',)

	def test_summary_unlabeled_single_row(self):
		"""Test one unlabeled summary row."""
		rows = [['subtype', 'a', 'b', 'c', 'd'], [None, '0', '2', '1', '0']]
		assert ConcreteParser().parse_summary(rows) == {None: PairCounts(0, 2, 1, 0)}

	def test_summary_unlabeled_row_must_be_alone(self):
		"""Test that an unlabeled row cannot be mixed with labeled ones."""
		rows = [
			['subtype', 'a', 'b', 'c', 'd'],
			[None, '0', '2', '1', '0'],
			['hs', '0', '2', '1', '0'],
		]
		with pytest.raises(StudyValidationError, match='only row'):
			ConcreteParser().parse_summary(rows)

	def test_summary_bad_count(self):
		"""Test that counts must be nonnegative integers."""
		rows = [['subtype', 'a', 'b', 'c', 'd'], ['hs', '0', '-2', '1', '0']]
		with pytest.raises(StudyParseError, match='line 2'):
			ConcreteParser().parse_summary(rows)

	def test_summary_duplicate_label(self):
		"""Test that a subtype may appear once."""
		rows = [
			['subtype', 'a', 'b', 'c', 'd'],
			['hs', '0', '2', '1', '0'],
			['hs', '0', '2', '1', '0'],
		]
		with pytest.raises(StudyParseError, match='line 3: duplicate subtype'):
			ConcreteParser().parse_summary(rows)

	def test_summary_without_rows(self):
		"""Test that a summary needs at least one row."""
		with pytest.raises(StudyParseError, match='no rows'):
			ConcreteParser().parse_summary([['subtype', 'a', 'b', 'c', 'd']])
