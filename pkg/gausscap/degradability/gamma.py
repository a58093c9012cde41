"""
Gamma Recursion (beam splitter, q < 1)
======================================
If a degrading map Gamma existed for the beam splitter, then for every n

    sum_l p_l(n) Gamma(|n+1-l><n+1-l|) = sum_l p_l(n) |l><l|

with p_l(n) from bs_output_spectrum. Solving for Gamma(|n+1><n+1|) writes
every image as k_n Gamma(|0><0|) + D_n with D_n a known diagonal. Whenever
k_n and k_m have opposite signs a convex combination of the two images
eliminates Gamma(|0><0|); a negative |1><1| entry there is impossible for a
channel, which refutes degradability.

Floats are used while the recursion stays well conditioned; otherwise the
whole computation is repeated with fractions.Fraction.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from gausscap.degradability.witness import NEGATIVE_TOL, DegradabilityWitness, WitnessKind
from gausscap.errors import DomainError, InadmissiblePair, RecursionBreakdown
from gausscap.fock.spectra import bs_output_spectrum

logger = logging.getLogger(__name__)

Number = Union[float, Fraction]

PIVOT_TOL       = 1e-13
GROWTH_LIMIT    = 1e12
CANCEL_TOL      = 1e-10
MAX_DENOMINATOR = 10 ** 8

Q_STAR = 0.5 + math.sqrt(3) / 6     # root of c(k_2, -k_1)
Q_SQRT = 1 / math.sqrt(2)           # k_2 changes sign


@dataclass(frozen=True)
class GammaImage:
    """Gamma(|n><n|) = k * Gamma(|0><0|) + diag(D)."""

    n: int
    k: Number
    D: Tuple[Number, ...]

    @property
    def trace_defect(self) -> float:
        return float(self.k + sum(self.D) - 1)


def _check_q(q: Number) -> None:
    if not 0 < q < 1:
        raise DomainError(f"beam splitter needs 0 < q < 1, got {q}")


def solve_gamma_recursion(q: Number, n_max: int) -> List[GammaImage]:
    """Images of |n><n| for n = 0..n_max, in the arithmetic of q."""
    _check_q(q)
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    zero = q * 0
    size = n_max + 2
    ks: List[Number] = [zero + 1]
    Ds: List[List[Number]] = [[zero] * size]

    for n in range(n_max):
        p = bs_output_spectrum(q, n)
        pivot = p[0]
        if abs(pivot) < PIVOT_TOL:
            raise RecursionBreakdown(n, float(pivot))
        k_next = -sum(p[l] * ks[n + 1 - l] for l in range(1, n + 2)) / pivot
        D_next = [zero] * size
        for l in range(n + 2):
            D_next[l] = D_next[l] + p[l]
        for l in range(1, n + 2):
            previous = Ds[n + 1 - l]
            D_next = [a - p[l] * b for a, b in zip(D_next, previous)]
        ks.append(k_next)
        Ds.append([v / pivot for v in D_next])

    return [GammaImage(n, ks[n], tuple(Ds[n])) for n in range(n_max + 1)]


def exact_q(q: float) -> Fraction:
    """Nearest rational with a bounded denominator, e.g. 0.72 -> 18/25."""
    return Fraction(q).limit_denominator(MAX_DENOMINATOR)


def _ill_conditioned(images: Sequence[GammaImage]) -> bool:
    scale = max(max(abs(im.k), max(abs(d) for d in im.D)) for im in images)
    return scale > GROWTH_LIMIT


def gamma_images(q: float, n_max: int, exact: Optional[bool] = None) -> List[GammaImage]:
    """Float images, or exact ones when asked or when floats are unreliable."""
    if exact is None:
        images = solve_gamma_recursion(float(q), n_max)
        if not _ill_conditioned(images):
            return images
        logger.debug("recursion at q=%s exceeds %.0e, switching to exact arithmetic", q, GROWTH_LIMIT)
    elif not exact:
        return solve_gamma_recursion(float(q), n_max)
    return solve_gamma_recursion(exact_q(q), n_max)


def _combine(a: GammaImage, b: GammaImage) -> Number:
    """|1><1| entry of the Gamma(|0><0|)-free convex combination of a and b."""
    if a.k * b.k >= 0:
        raise InadmissiblePair(f"k_{a.n} = {float(a.k):.4g} and k_{b.n} = {float(b.k):.4g} do not have opposite signs")
    wa, wb = abs(b.k), abs(a.k)
    return (wa * a.D[1] + wb * b.D[1]) / (wa + wb)


def c_coefficient(q: float, n: int, m: int, images: Optional[Sequence[GammaImage]] = None) -> float:
    """c(k_n, k_m): |1><1| coefficient once Gamma(|0><0|) has been eliminated."""
    _check_q(q)
    if images is None:
        images = gamma_images(q, max(n, m))
    a, b = images[n], images[m]
    if a.k * b.k < 0 and isinstance(a.k, float) and abs(a.k + b.k) < CANCEL_TOL:
        exact = gamma_images(q, max(n, m), exact=True)
        a, b = exact[n], exact[m]
    return float(_combine(a, b))


def proposition_sign_coefficients(q: float) -> Tuple[float, float, float]:
    """|2><2|, |1><1| and |0><0| entries of the combination of Gamma(|1>) and Gamma(|2>).

    For 1/sqrt(2) <= q < 1/2 + sqrt(3)/6 their signs are (+, -, +).
    """
    _check_q(q)
    den = q * (2 * q * q - 1)
    return (
        2 * (1 - q) ** 2 / (2 * q * q - 1),
        1 + (1 - 2 * q) ** 3 / den,
        (1 - q) / q + (1 - q) * (-1 + 6 * q - 6 * q * q) / den,
    )


# ── Scans ──────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class NegativityScan:
    q: float
    n_max: int
    min_value: Optional[float]
    n: Optional[int]
    m: Optional[int]
    exact: bool

    @property
    def found(self) -> bool:
        return self.min_value is not None


def min_negativity_scan(q: float, n_max: int = 50) -> NegativityScan:
    """Minimum of c(k_n, k_m) over opposite-sign pairs with n, m <= n_max."""
    _check_q(q)
    images = gamma_images(q, n_max)
    exact = not isinstance(images[0].k, float)
    best: Optional[Tuple[Number, int, int]] = None
    for n in range(1, n_max + 1):
        for m in range(n):
            if images[n].k * images[m].k >= 0:
                continue
            value = _combine(images[n], images[m])
            if best is None or value < best[0]:
                best = (value, n, m)
    if best is None:
        logger.warning("no opposite-sign pair with n, m <= %d at q=%s", n_max, q)
        return NegativityScan(q, n_max, None, None, None, exact)
    return NegativityScan(q, n_max, float(best[0]), best[1], best[2], exact)


def negativity_witness(q: float, n_max: int = 50) -> Optional[DegradabilityWitness]:
    """Witness from the scan minimum, or None when the scan is inconclusive."""
    scan = min_negativity_scan(q, n_max)
    if not scan.found or scan.min_value >= -NEGATIVE_TOL:
        return None
    return DegradabilityWitness(
        q,
        WitnessKind.NEGATIVITY,
        scan.min_value,
        {"n": scan.n, "m": scan.m, "n_max": n_max, "exact": scan.exact},
    )


# ── Figure tables ──────────────────────────────────────────────────────────────
# (lo, hi, n, m, label); both ends closed so that the boundary q* carries two rows
FIGURE1_PRESETS: Tuple[Tuple[float, float, int, int, str], ...] = (
    (0.5,    Q_SQRT, 4, 2, "c(k_4,-k_2)"),
    (Q_SQRT, Q_STAR, 2, 1, "c(k_2,-k_1)"),
    (Q_STAR, 0.8,    4, 2, "c(-k_4,k_2)"),
)


def figure1_presets(q: float) -> List[Tuple[int, int, str]]:
    return [(n, m, label) for lo, hi, n, m, label in FIGURE1_PRESETS if lo <= q <= hi]


def figure1_grid(qs: Sequence[float]) -> List[float]:
    """Sorted q values inside (0, 1), with q* added."""
    return sorted(q for q in set(qs) | {Q_STAR} if 0 < q < 1)


def figure1_row_set(q: float) -> List[Dict[str, object]]:
    """One row (q, label, n, m, value) per preset that applies at q."""
    presets = figure1_presets(q)
    if not presets:
        return []
    images = gamma_images(q, 4)
    rows = []
    for n, m, label in presets:
        try:
            value = c_coefficient(q, n, m, images)
        except InadmissiblePair as exc:
            logger.debug("fig1 skips %s at q=%s: %s", label, q, exc)
            continue
        rows.append({"q": q, "label": label, "n": n, "m": m, "value": value})
    return rows


def figure1_rows(qs: Sequence[float]) -> Iterator[Dict[str, object]]:
    for q in figure1_grid(qs):
        yield from figure1_row_set(q)


def figure2_row(q: float, n_max: int = 50) -> Dict[str, object]:
    scan = min_negativity_scan(q, n_max)
    return {"q": q, "min": scan.min_value, "n": scan.n, "m": scan.m}
