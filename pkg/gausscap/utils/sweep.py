"""
Grid Sweeps
===========
Parsing of q grids and dispatch of independent grid points to a process
pool. Results always come back in grid order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, InvalidOperation
from typing import Callable, List, Sequence, TypeVar

from gausscap.errors import DomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parse_q_range(text: str) -> List[float]:
    """'start:stop:step' -> inclusive grid, e.g. 0.51:0.99:0.01 has 49 points.

    Decimal arithmetic keeps every point at the printed precision.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"q range must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (Decimal(p.strip()) for p in parts)
    except InvalidOperation:
        raise DomainError(f"q range {text!r} is not numeric")
    if step <= 0:
        raise DomainError(f"step must be > 0, got {step}")
    if stop < start:
        raise DomainError(f"empty range {text!r}")
    count = int((stop - start) / step) + 1
    return [float(start + i * step) for i in range(count)]


def parse_float_list(text: str) -> List[float]:
    """'0.6, 0.75' -> [0.6, 0.75]."""
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"expected a comma separated list of numbers, got {text!r}")
    if not values:
        raise DomainError("empty list")
    return values


def run_pool(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """func over items, in item order; in-process when jobs == 1."""
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.debug("dispatching %d grid points to %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
