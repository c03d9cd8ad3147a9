"""Tests for StudyCSVParser and SummaryCSVParser."""

import pytest

from src.afesens.core.pair_counts import PairCounts
from src.afesens.errors import StudyParseError
from src.afesens.parsers.csv_parser import StudyCSVParser, SummaryCSVParser

LONG_CSV = b"""set_id,unit_id,exposed,case,subtype
1,1,1,1,hs
1,2,0,0,
2,1,0,1,hi
2,2,1,0,
"""

SUMMARY_CSV = b"""subtype,a,b,c,d
hormone_sensitive,1,86,43,3024
hormone_insensitive,1,15,21,855
"""


class TestStudyCSVParser:
	"""Tests for StudyCSVParser class."""

	def test_csv_parser_creation_default(self):
		"""Test CSV parser creation with default parameters."""
		parser = StudyCSVParser()
		assert parser.delimiter == ','
		assert parser.quotechar == '"'
		assert parser.encoding is None

	def test_csv_parser_creation_custom(self):
		"""Test CSV parser creation with custom parameters."""
		parser = StudyCSVParser(delimiter=';', quotechar="'", encoding='utf-8')
		assert parser.delimiter == ';'
		assert parser.quotechar == "'"
		assert parser.encoding == 'utf-8'

	def test_parse_long_csv(self):
		"""Test parsing long-layout CSV."""
		study = StudyCSVParser().parse(LONG_CSV)

		assert study.n_sets == 2
		assert study.subtype_labels == ('hs', 'hi')
		assert study.summarize_pairs('hs') == PairCounts(a=0, b=1, c=0, d=0)
		assert study.summarize_pairs('hi') == PairCounts(a=0, b=0, c=1, d=0)

	def test_parse_summary_csv(self):
		"""Test parsing summary-layout CSV into tables."""
		tables = StudyCSVParser().parse_summary(SUMMARY_CSV)

		assert list(tables) == ['hormone_sensitive', 'hormone_insensitive']
		assert tables['hormone_sensitive'] == PairCounts(1, 86, 43, 3024)

	def test_parse_with_bom(self):
		"""Test that a UTF-8 byte order mark is ignored."""
		study = StudyCSVParser().parse('\ufeff'.encode() + LONG_CSV)
		assert study.n_sets == 2

	def test_parse_semicolon(self):
		"""Test parsing with a custom delimiter."""
		data = LONG_CSV.replace(b',', b';')
		study = StudyCSVParser(delimiter=';').parse(data)
		assert study.n_sets == 2

	def test_parse_from_string(self):
		"""Test parsing from string."""
		study = StudyCSVParser().parse_from_string(LONG_CSV.decode())
		assert study.exposed_cases == 1

	def test_detect_delimiter(self):
		"""Test delimiter detection."""
		parser = StudyCSVParser()
		assert parser.detect_delimiter(LONG_CSV) == ','
		assert parser.detect_delimiter(LONG_CSV.replace(b',', b';')) == ';'
		assert parser.detect_delimiter(LONG_CSV.replace(b',', b'\t')) == '\t'

	def test_latin1_fallback(self):
		"""Test decoding fallback for non-UTF-8 bytes."""
		data = 'subtype,a,b,c,d\ncancer_é,0,1,1,0\n'.encode('latin-1')
		tables = StudyCSVParser(encoding='utf-8').parse_summary(data)
		assert len(tables) == 1

	def test_empty_data(self):
		"""Test that empty data is rejected."""
		with pytest.raises(StudyParseError, match='line 1'):
			StudyCSVParser().parse(b'')

	def test_bad_row_line_number(self):
		"""Test that the offending line is reported."""
		data = LONG_CSV + b'3,1,x,1,hs\n'
		with pytest.raises(StudyParseError, match='line 6'):
			StudyCSVParser().parse(data)


class TestSummaryCSVParser:
	"""Tests for SummaryCSVParser class."""

	def test_parse_reconstructs_study(self):
		"""Test reconstruction of the synthetic 1:1 study."""
		study = SummaryCSVParser().parse(SUMMARY_CSV)

		assert study.n_sets == 4046
		assert study.exposed_cases == 103
		assert study.summarize_pairs('hormone_insensitive') == PairCounts(1, 15, 21, 855)

	def test_long_layout_rejected(self):
		"""Test that the summary parser requires the summary header."""
		with pytest.raises(StudyParseError, match='expected header subtype,a,b,c,d'):
			SummaryCSVParser().parse(LONG_CSV)
