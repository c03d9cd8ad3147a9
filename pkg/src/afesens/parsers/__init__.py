"""Modules for parsing matched case-referent data."""

from .base_parser import BaseParser
from .csv_parser import StudyCSVParser, SummaryCSVParser
from .xlsx_parser import XLSXParser

__all__ = ['StudyCSVParser', 'SummaryCSVParser', 'XLSXParser', 'BaseParser']
