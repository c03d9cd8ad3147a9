"""Thread pool helpers shared by the grid and Monte Carlo drivers."""

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

logger = logging.getLogger(__name__)

THREADS_ENV = 'AFESENS_THREADS'

T = TypeVar('T')
R = TypeVar('R')


def default_workers() -> int:
	"""Default worker count: AFESENS_THREADS, else min(8, cpu count)."""
	value = os.environ.get(THREADS_ENV)
	if value:
		try:
			workers = int(value)
			if workers >= 1:
				return workers
		except ValueError:
			pass
		logger.warning(f'Ignoring invalid {THREADS_ENV}={value!r}')
	return min(8, os.cpu_count() or 1)


def map_ordered(
	func: Callable[[T], R], items: Iterable[T], workers: int | None = None
) -> list[R]:
	"""Applies func to every item, in parallel, keeping input order.

	Args:
		func: Function to apply
		items: Inputs
		workers: Worker count (if None, default_workers())

	Returns:
		Results in input order
	"""
	items = list(items)
	workers = workers or default_workers()
	if workers == 1 or len(items) <= 1:
		return [func(item) for item in items]

	with ThreadPoolExecutor(max_workers=workers) as executor:
		return list(executor.map(func, items))


def replicate_rng(seed: int, index: int) -> np.random.Generator:
	"""Independent random stream for replicate index under a master seed."""
	return np.random.default_rng([seed, index])
