"""Utilities for the library."""

from .data_utils import DataUtils
from .report_writer import ReportWriter

__all__ = ['DataUtils', 'ReportWriter']
