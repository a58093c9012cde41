"""
Classical Capacity Bounds
=========================
Holevo-type lower bounds for the sender (chi_H) and the helper (chi_A),
the generic and per-class uncertainty relations between them, the
conferencing-encoder bound, the classical capacity lower bound with
squeezed helper states, and the continuity bound for energy-limited
channels.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from gausscap.capacities.quantum import max_squeezing
from gausscap.core.channels import (
    ChannelClass,
    Dilated,
    OmgClass,
    as_dilation,
    classify_omg,
    effective_channel,
)
from gausscap.core.symplectic import (
    CovarianceMatrix,
    EnergyBudget,
    entropy_of_matrix,
    g_entropy,
    g_occupation,
    symplectic_spectrum,
)
from gausscap.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UncertaintyReport:
    chi_h_lower: float
    chi_a_lower: float
    generic_bound: float
    class_bound: Optional[float]
    channel_class: ChannelClass
    class_min_difference: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.chi_h_lower + self.chi_a_lower >= self.generic_bound - 1e-12

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chi_h_lower":          self.chi_h_lower,
            "chi_a_lower":          self.chi_a_lower,
            "generic_bound":        self.generic_bound,
            "class_bound":          self.class_bound,
            "class_min_difference": self.class_min_difference,
            **self.channel_class.to_dict(),
        }


# ── Classical capacity with a squeezed helper ──────────────────────────────────
def threshold_power(x: float, y: float, s: float) -> float:
    """Sender power needed to use helper squeezing s."""
    a = abs(s)
    return math.exp(2 * a) + 2 * y * math.sinh(2 * a) / abs(x) - 1


def classical_capacity_lower_bound(x: float, y: float, budget: EnergyBudget) -> float:
    """max_s g(|x|P_A + y cosh 2s + (|x|-1)/2) - g(y + (|x|-1)/2).

    Arguments of g are mean photon numbers. The objective grows with |s|,
    so the maximum sits at the largest s allowed both by the helper's
    energy and by P_A >= threshold_power(s).
    """
    if x == 0 or x == 1:
        raise DomainError(f"x must differ from 0 and 1, got {x}")
    if y < 0:
        raise DomainError(f"y must be >= 0, got {y}")

    s_hi = max_squeezing(budget.p_e)
    if s_hi > 0 and threshold_power(x, y, s_hi) > budget.p_a:
        s_hi = brentq(lambda s: threshold_power(x, y, s) - budget.p_a, 0.0, s_hi, xtol=1e-14)

    ax = abs(x)
    offset = (ax - 1) / 2
    return g_occupation(ax * budget.p_a + y * math.cosh(2 * s_hi) + offset) - g_occupation(y + offset)


# ── Holevo lower bounds ────────────────────────────────────────────────────────
def _chi(signal: np.ndarray, noise: np.ndarray, power: float) -> float:
    loaded = (power + 0.5) * signal + 0.5 * noise
    idle = 0.5 * signal + 0.5 * noise
    return entropy_of_matrix(loaded) - entropy_of_matrix(idle)


def chi_h_lower(w: Dilated, budget: EnergyBudget) -> float:
    """S((P_A+1/2) M M^T + N N^T/2) - S(M M^T/2 + N N^T/2)."""
    d = as_dilation(w)
    return _chi(d.M @ d.M.T, d.N @ d.N.T, budget.p_a)


def chi_a_lower(w: Dilated, budget: EnergyBudget) -> float:
    d = as_dilation(w)
    return _chi(d.N @ d.N.T, d.M @ d.M.T, budget.p_e)


def uncertainty_lower_bound(budget: EnergyBudget) -> float:
    lo, hi = sorted((budget.p_a, budget.p_e))
    return lo / (2 * hi + 1)


def _require_n0(n0: Optional[float], tag: OmgClass) -> float:
    if n0 is None or n0 < 0:
        raise DomainError(f"class {tag.value} needs N0 >= 0, got {n0}")
    return n0


def class_uncertainty_bound(
    tag: OmgClass,
    budget: EnergyBudget,
    kappa: Optional[float] = None,
    n0: Optional[float] = None,
) -> float:
    """Lower bound on chi_H + chi_A for the canonical class ``tag``."""
    g = g_entropy
    pa, pe = budget.p_a, budget.p_e

    if tag is OmgClass.A1:
        return g(pe + 0.5)
    if tag is OmgClass.A2:
        return g(math.sqrt((pa + 1) / 2)) + g(math.sqrt((pe + 1) * (pe + 0.5))) - 2 * g(math.sqrt(0.5))
    if tag is OmgClass.B1:
        n0 = _require_n0(n0, tag)
        return (
            g(math.sqrt((pa + 0.5 + 1 / (2 * n0 + 1)) * (pa + 0.5)))
            + g(math.sqrt((pe + 0.5) / (4 * n0 + 2) + 0.5))
            - 2 * g(math.sqrt(0.25 + 1 / (4 * n0 + 2)))
        )
    if tag is OmgClass.B2:
        n0 = _require_n0(n0, tag)
        shift = n0 / (2 * n0 + 1)
        return (
            g(pa + 0.5 + shift)
            + g((pe + 0.5) * n0 / (n0 + 0.5) + 0.5)
            - 2 * g(0.5 + shift)
        )

    if kappa is None:
        raise DomainError(f"class {tag.value} needs kappa")
    if tag is OmgClass.C_ATT and 0 < kappa < 1:
        return g((pa + 0.5) * kappa + 1 - kappa) + g((pe + 0.5) * (1 - kappa) + kappa)
    if tag is OmgClass.C_AMP and kappa > 1:
        return (
            g((pa + 0.5) * kappa + kappa - 1)
            + g((pe + 0.5) * (kappa - 1) + kappa)
            - 2 * g(kappa - 0.5)
        )
    if tag is OmgClass.D and kappa < 0:
        k = abs(kappa)
        return (
            g((pa + 0.5) * k + 1 - kappa)
            + g((pe + 0.5) * (1 - kappa) + k)
            - 2 * g((k + abs(1 - kappa)) / 2)
        )
    raise DomainError(f"kappa={kappa} is outside the domain of class {tag.value}")


def combined_class_c_bound(kappa: float, budget: EnergyBudget) -> float:
    """Attenuator and amplifier bounds of class C written as one expression."""
    if kappa <= 0 or kappa == 1:
        raise DomainError(f"class C needs kappa > 0, kappa != 1, got {kappa}")
    a = abs(1 - kappa)
    return (
        g_entropy((budget.p_a + 0.5) * kappa + a)
        + g_entropy((budget.p_e + 0.5) * a + kappa)
        - 2 * g_entropy((a + kappa) / 2)
    )


def class_c_min_difference(kappa: float) -> float:
    """Gap between the class C bound and the generic one as min(P_A, P_E) -> 0."""
    if kappa <= 0 or kappa == 1:
        raise DomainError(f"class C needs kappa > 0, kappa != 1, got {kappa}")
    if kappa < 1:
        return g_entropy(1 - kappa / 2) + g_entropy((1 + kappa) / 2)
    return 2 * g_entropy(1.5 * kappa - 1) - 2 * g_entropy(kappa - 0.5)


def uncertainty_report(
    w: Dilated,
    budget: EnergyBudget,
    v_e: Optional[CovarianceMatrix] = None,
) -> UncertaintyReport:
    """chi bounds of ``w`` next to the generic and class-specific relations.

    The class is read from the effective channel with helper state v_e
    (vacuum by default).
    """
    d = as_dilation(w)
    ch_class = classify_omg(effective_channel(d, v_e or CovarianceMatrix.vacuum()))
    class_bound = min_diff = None
    if ch_class.tag is not OmgClass.UNCLASSIFIED:
        try:
            class_bound = class_uncertainty_bound(ch_class.tag, budget, ch_class.kappa, ch_class.n0)
        except DomainError as exc:
            logger.warning("no class bound for %s: %s", ch_class.tag.value, exc)
    if ch_class.tag in (OmgClass.C_ATT, OmgClass.C_AMP):
        min_diff = class_c_min_difference(ch_class.kappa)
    return UncertaintyReport(
        chi_h_lower(d, budget),
        chi_a_lower(d, budget),
        uncertainty_lower_bound(budget),
        class_bound,
        ch_class,
        min_diff,
    )


# ── Conferencing encoders ──────────────────────────────────────────────────────
@dataclass(frozen=True)
class ConferencingBound:
    value: float
    ideal_channel_value: float
    literal_value: float
    nu: List[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value":               self.value,
            "ideal_channel_value": self.ideal_channel_value,
            "literal_value":       self.literal_value,
            "nu":                  list(self.nu),
        }


def conferencing_lower_bound(w: Dilated, P_A: float) -> ConferencingBound:
    """sum_i g((2P_A+1) nu_i/2) - g(nu_i/2) over nu_i of M M^T + N N^T.

    g is taken by occupation, g_occupation(nu/2 - 1/2) = g(nu/2), so the sum
    stays defined for nu_i >= 1. For M M^T + N N^T = I it reduces to the
    ideal channel value g(P_A + 1/2). The unshifted reading g(P_A) is kept
    as `literal_value` (nan for P_A < 1/2, where g is undefined).
    """
    if P_A < 0:
        raise DomainError(f"P_A must be >= 0, got {P_A}")
    d = as_dilation(w)
    nu = [float(v) for v in symplectic_spectrum(d.M @ d.M.T + d.N @ d.N.T)]
    value = math.fsum(
        g_occupation((2 * P_A + 1) * v / 2 - 0.5) - g_occupation(v / 2 - 0.5) for v in nu
    )
    literal = g_entropy(P_A) if P_A >= 0.5 else math.nan
    return ConferencingBound(value, g_entropy(P_A + 0.5), literal, nu)


# ── Continuity ─────────────────────────────────────────────────────────────────
def output_energy_bound(budget: EnergyBudget) -> float:
    """Mean output energy of B never exceeds 2P_A + 2P_E."""
    return 2 * budget.p_a + 2 * budget.p_e


def continuity_bound(epsilon: float, P_B: float) -> float:
    """28 sqrt(eps) g(4 P_B/sqrt(eps) + 1/2) + 3 g(sqrt(eps) + 1/2)."""
    if not 0 < epsilon <= 1:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    if P_B < 0:
        raise DomainError(f"P_B must be >= 0, got {P_B}")
    root = math.sqrt(epsilon)
    return 28 * root * g_entropy(4 * P_B / root + 0.5) + 3 * g_entropy(root + 0.5)
