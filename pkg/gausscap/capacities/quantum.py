"""
Quantum Capacities
==================
Coherent-information quantities of the helper-assisted channel A -> B:

  - coherent_information_gaussian   S(B) - S(F) for Gaussian inputs
  - optimized_coherent_info_omg     closed form for one-mode channels (x, y)
  - q_ghx_closed_form               capacity of U^(q) with unlimited energy
  - maximize_coherent_info          energy-constrained numerical maximum
  - energy_constrained_q_lower_bound Gibbs-input lower bound
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.special import xlogy

from gausscap.capacities.optimize import coordinate_ascent, line_search
from gausscap.core.channels import Dilated, as_dilation, squeezed_env_cm
from gausscap.core.symplectic import (
    CovarianceMatrix,
    EnergyBudget,
    entropy_gaussian,
    rotation,
)
from gausscap.errors import DimensionMismatch, DomainError

logger = logging.getLogger(__name__)


class Method(Enum):
    CLOSED_FORM = "closed_form"
    OPTIMIZED   = "optimized"
    BOUND       = "bound"


@dataclass(frozen=True)
class CapacityResult:
    value: float
    method: Method
    optimizer: Dict[str, Any] = field(default_factory=dict)
    converged: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value":     self.value,
            "method":    self.method.value,
            "optimizer": dict(self.optimizer),
            "converged": self.converged,
        }


def gibbs_state_cm(P: float, n_modes: int = 1) -> CovarianceMatrix:
    if P < 0:
        raise DomainError(f"mean photon number must be >= 0, got {P}")
    return CovarianceMatrix.thermal(P, n_modes)


def max_squeezing(P: float) -> float:
    """Largest s with cosh(2s) <= 2P + 1."""
    return math.acosh(2 * P + 1) / 2


def coherent_information_gaussian(
    w: Dilated,
    v_e: CovarianceMatrix,
    v_a: CovarianceMatrix,
) -> float:
    """S(M V_A M^T + N V_E N^T) - S(O V_A O^T + P V_E P^T)."""
    d = as_dilation(w)
    if v_a.n_modes != d.n_a or v_e.n_modes != d.n_e:
        raise DimensionMismatch("input CMs do not match the dilation")
    out = d.evolve(v_a, v_e).V
    k = 2 * d.n_a
    return entropy_gaussian(CovarianceMatrix(out[:k, :k])) - entropy_gaussian(
        CovarianceMatrix(out[k:, k:])
    )


def optimized_coherent_info_omg(x: float, y: float) -> CapacityResult:
    """Coherent information of a one-mode channel maximized over inputs.

    With a = |1 - x| and K = (y - a)/2 the value is
    (K/a) ln(K/a) - ((K+a)/a) ln((K+a)/a) + ln(x/a). Anti-degradable
    channels (K < 0) are reported as 0 with ``clipped`` set.
    """
    if x == 0 or x == 1:
        raise DomainError(f"x must differ from 0 and 1, got {x}")
    if x < 0 or y < 0:
        raise DomainError(f"negative channel parameters x={x}, y={y}")

    a = abs(1 - x)
    K = (y - a) / 2
    if K < 0:
        logger.warning("K = %.3e < 0 for x=%s, y=%s: anti-degradable, value set to 0", K, x, y)
        return CapacityResult(0.0, Method.CLOSED_FORM, {"K": K, "clipped": True})

    ratio = K / a
    # xlogy gives 0 ln 0 = 0 at K = 0
    value = xlogy(ratio, ratio) - xlogy(ratio + 1, ratio + 1) + math.log(x / a)
    return CapacityResult(float(value), Method.CLOSED_FORM, {"K": K, "clipped": False})


def q_ghx_closed_form(q: float) -> float:
    """Unconstrained capacity of U^(q); zero in the anti-degradable range."""
    if q <= 0 or q == 1:
        raise DomainError(f"q must be positive and different from 1, got {q}")
    if q <= 0.5:
        return 0.0
    if q < 1:
        return math.log(q / (1 - q))
    return math.log(q / (q - 1))


# ── Energy-constrained optimization ────────────────────────────────────────────
def _input_cm(P_A: float, u: float, t: float, phi: float) -> CovarianceMatrix:
    """Squeezed thermal state with mean photon number <= P_A.

    t is the squeezing, u in [0, 1] the fraction of the remaining energy
    spent on thermal occupation.
    """
    occupation = u * max((P_A + 0.5) / math.cosh(2 * t) - 0.5, 0.0)
    R = rotation(phi)
    core = np.diag([math.exp(2 * t), math.exp(-2 * t)])
    return CovarianceMatrix((occupation + 0.5) * R @ core @ R.T)


def maximize_coherent_info(
    w: Dilated,
    budget: EnergyBudget,
    start: Optional[Sequence[float]] = None,
) -> CapacityResult:
    """Maximize I_c over Gaussian V_A and pure squeezed V_E within budget.

    Coordinates are (u, t, phi, s, theta); the default start is a thermal
    input at full energy with a vacuum helper.
    """
    d = as_dilation(w)
    if d.n_a != 1 or d.n_e != 1:
        raise DimensionMismatch("optimization is implemented for one-mode sender and helper")

    t_max, s_max = max_squeezing(budget.p_a), max_squeezing(budget.p_e)
    bounds = [(0.0, 1.0), (0.0, t_max), (0.0, math.pi), (0.0, s_max), (0.0, math.pi)]

    def objective(v: np.ndarray) -> float:
        u, t, phi, s, theta = v
        return coherent_information_gaussian(d, squeezed_env_cm(s, theta), _input_cm(budget.p_a, u, t, phi))

    result = coordinate_ascent(objective, bounds, start if start is not None else (1.0, 0.0, 0.0, 0.0, 0.0))
    u, t, phi, s, theta = result.x
    optimizer = {
        "n_bar": u * max((budget.p_a + 0.5) / math.cosh(2 * t) - 0.5, 0.0),
        "t":     t,
        "phi":   phi,
        "s":     s,
        "theta": theta,
        "x":     list(result.x),
    }
    return CapacityResult(result.value, Method.OPTIMIZED, optimizer, result.converged)


def energy_constrained_q_lower_bound(
    w: Dilated,
    budget: EnergyBudget,
    n_theta: int = 8,
    n_grid: int = 17,
) -> float:
    """Best I_c with a Gibbs input over pure squeezed helper states.

    The squeezing is scanned on a grid for each angle and refined by a
    bounded search around the best grid point.
    """
    d = as_dilation(w)
    v_a = gibbs_state_cm(budget.p_a, d.n_a)
    s_max = max_squeezing(budget.p_e)

    def at(s: float, theta: float) -> float:
        return coherent_information_gaussian(d, squeezed_env_cm(s, theta), v_a)

    best = at(0.0, 0.0)
    if s_max == 0:
        return best

    grid = np.linspace(0.0, s_max, n_grid)
    step = grid[1] - grid[0]
    for theta in np.linspace(0.0, math.pi, n_theta, endpoint=False):
        values = [at(s, theta) for s in grid]
        i = int(np.argmax(values))
        lo, hi = max(grid[i] - step, 0.0), min(grid[i] + step, s_max)
        _, refined = line_search(lambda s: at(s, theta), lo, hi)
        best = max(best, values[i], refined)
    return best
