"""
Coordinate Ascent
=================
Box-constrained maximization by cycling through the coordinates and running
a bounded scalar search along each one. Objectives in this package are
concave in the covariance matrix, so a local maximum is what we are after.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

logger = logging.getLogger(__name__)

IMPROVEMENT_TOL = 1e-10
MAX_SWEEPS      = 10_000


@dataclass(frozen=True)
class AscentResult:
    x: Tuple[float, ...]
    value: float
    converged: bool
    sweeps: int


def line_search(f: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
    """Best of the bounded Brent search and both endpoints."""
    res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    candidates = [(lo, f(lo)), (hi, f(hi)), (float(res.x), -float(res.fun))]
    return max(candidates, key=lambda c: c[1])


def coordinate_ascent(
    objective: Callable[[np.ndarray], float],
    bounds: Sequence[Tuple[float, float]],
    start: Sequence[float],
    tol: float = IMPROVEMENT_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> AscentResult:
    x = np.clip(np.array(start, dtype=float), [b[0] for b in bounds], [b[1] for b in bounds])
    value = objective(x)
    for sweep in range(1, max_sweeps + 1):
        previous = value
        for i, (lo, hi) in enumerate(bounds):
            if hi - lo <= 0:
                continue

            def along(t: float, i: int = i) -> float:
                trial = x.copy()
                trial[i] = t
                return objective(trial)

            t, v = line_search(along, lo, hi)
            if v > value:
                x[i], value = t, v
        logger.debug("sweep %d: value %.15g", sweep, value)
        if value - previous < tol:
            return AscentResult(tuple(float(c) for c in x), value, True, sweep)

    logger.warning("coordinate ascent stopped after %d sweeps without converging", max_sweeps)
    return AscentResult(tuple(float(c) for c in x), value, False, max_sweeps)
