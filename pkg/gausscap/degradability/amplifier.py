"""
Relative-Entropy Witness (amplifier, q > 1)
===========================================
A degradable amplifier would make D(N(m1)||N(m2)) >= D(N~(m1)||N~(m2)) for
Fock inputs |m1>, |m2>. The difference of the two sides is

    gap = a(m1) ln(a(m2) / c[m2, m1-m2-1])
          + sum_n c[m1, n] ln(c[m2, n] / c[m2, n+m1-m2])

with a(m) = m(q-1)/q^(m+1). At q = x/y the weight c[y, x-y-1] vanishes, so
the sum diverges to -inf as q' -> q from above; a certified gap < 0 at some
q' nearby refutes degradability there.

The tail n > trunc is enclosed in an interval using the known total mass and
monotone bounds on the log ratio, whose limit is (m1-m2) ln(q/(q-1)).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from gausscap.core.symplectic import relative_entropy_diagonal
from gausscap.degradability.witness import NEGATIVE_TOL, DegradabilityWitness, WitnessKind
from gausscap.errors import DomainError, WitnessNotFound
from gausscap.fock.spectra import amp_atom, amp_terms, c_mn, log_c_mn

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 200
MAX_TRUNCATION     = 20_000
RELATIVE_WIDTH     = 1e-6
DEFAULT_EPS_GRID   = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9)


@dataclass(frozen=True)
class CertifiedGap:
    """Partial sum up to ``truncation`` plus an interval for the tail."""

    q: float
    m1: int
    m2: int
    truncation: int
    partial: float
    tail_low: float
    tail_high: float

    @property
    def lower(self) -> float:
        return self.partial + self.tail_low

    @property
    def upper(self) -> float:
        return self.partial + self.tail_high

    @property
    def value(self) -> float:
        if math.isinf(self.partial):
            return self.partial
        return self.partial + (self.tail_low + self.tail_high) / 2

    @property
    def width(self) -> float:
        return self.tail_high - self.tail_low


def _log_ratio_bounds(q: float, m2: int, k: int, n0: int) -> Tuple[float, float]:
    """Bounds on ln(c[m2, n] / c[m2, n+k]) valid for every n >= n0."""
    a = m2 * (q - 1)
    limit = k * math.log(q / (q - 1))
    if n0 + 1 <= a:
        return -math.inf, math.inf
    high = limit + math.log((n0 + k + 1) / (n0 + 1))
    low = limit + 2 * math.log((n0 + 1 - a) / (n0 + k + 1 - a))
    low += math.fsum(math.log((n0 + j) / (n0 + k + j)) for j in range(1, m2 + 1))
    return low, high


def relative_entropy_gap(q_prime: float, m1: int, m2: int, trunc: int = DEFAULT_TRUNCATION) -> CertifiedGap:
    """Gap between the B and F relative entropies of |m1> and |m2>, tail enclosed."""
    if not q_prime > 1:
        raise DomainError(f"amplifier needs q > 1, got {q_prime}")
    if not m1 > m2 >= 1:
        raise DomainError(f"need m1 > m2 >= 1, got m1={m1}, m2={m2}")
    k = m1 - m2
    q = q_prime

    # logs keep the ratios exact after c[m2, n] itself underflows
    log_ref = [log_c_mn(q, m2, n) for n in range(trunc + k + 1)]
    weights = [c_mn(q, m1, n) for n in range(trunc + 1)]

    for n in range(trunc + 1):
        if log_ref[n] == -math.inf and weights[n] > 0.0:
            logger.debug("support of N(|%d>) misses |%d> at q=%s", m2, n + m2, q)
            return CertifiedGap(q, m1, m2, trunc, -math.inf, 0.0, 0.0)

    if log_ref[k - 1] == -math.inf:
        return CertifiedGap(q, m1, m2, trunc, math.inf, 0.0, 0.0)

    terms = [amp_atom(q, m1) * (math.log(amp_atom(q, m2)) - log_ref[k - 1])]
    for n in range(trunc + 1):
        if weights[n] == 0.0:
            continue
        if log_ref[n + k] == -math.inf:
            return CertifiedGap(q, m1, m2, trunc, math.inf, 0.0, 0.0)
        terms.append(weights[n] * (log_ref[n] - log_ref[n + k]))
    partial = math.fsum(terms)

    tail_mass = max(1.0 - amp_atom(q, m1) - math.fsum(weights), 0.0)
    low, high = _log_ratio_bounds(q, m2, k, trunc + 1)
    if tail_mass == 0.0:
        return CertifiedGap(q, m1, m2, trunc, partial, 0.0, 0.0)
    return CertifiedGap(q, m1, m2, trunc, partial, tail_mass * low, tail_mass * high)


def _padded_spectra(q: float, m: int, length: int) -> Tuple[np.ndarray, np.ndarray]:
    terms = np.array([c_mn(q, m, n) for n in range(length)])
    atom = amp_atom(q, m)
    out_b = np.zeros(length + m)
    out_b[m:m + length] = terms
    out_b[m - 1] += atom
    out_f = np.zeros(length + 1)
    out_f[1:] = terms
    out_f[0] = atom
    return out_b, out_f


def relative_entropy_gap_from_spectra(q_prime: float, m1: int, m2: int, tol: float = 1e-12) -> float:
    """D(N(m1)||N(m2)) - D(N~(m1)||N~(m2)) from the full output spectra.

    Uncertified; both spectra are cut where each misses less than tol.
    """
    if not m1 > m2 >= 1:
        raise DomainError(f"need m1 > m2 >= 1, got m1={m1}, m2={m2}")
    length = max(len(amp_terms(q_prime, m1, tol)), len(amp_terms(q_prime, m2, tol)))
    # |n+m1> on B pairs with the m2 weight of index n + m1 - m2
    b1, f1 = _padded_spectra(q_prime, m1, length)
    b2, f2 = _padded_spectra(q_prime, m2, length + m1 - m2)
    f1 = np.concatenate([f1, np.zeros(len(f2) - len(f1))])
    return relative_entropy_diagonal(b1, b2) - relative_entropy_diagonal(f1, f2)


def witness_orders(x: int, y: int) -> Tuple[int, int, int]:
    """(m1, m2, n') for q = x/y: c[m2, n'] vanishes exactly at q.

    m1 = x + 1 keeps every other weight in the gap nonzero at q.
    """
    if x <= y or y < 1:
        raise DomainError(f"need integers x > y >= 1, got x={x}, y={y}")
    if math.gcd(x, y) != 1:
        raise DomainError(f"x={x} and y={y} must be coprime")
    return x + 1, y, x - y - 1


def certified_gap(q_prime: float, m1: int, m2: int, trunc: int = DEFAULT_TRUNCATION) -> CertifiedGap:
    """Grow the truncation until the tail interval is negligible."""
    gap = relative_entropy_gap(q_prime, m1, m2, trunc)
    while (
        math.isfinite(gap.partial)
        and gap.width >= RELATIVE_WIDTH * abs(gap.partial)
        and gap.truncation < MAX_TRUNCATION
    ):
        gap = relative_entropy_gap(q_prime, m1, m2, min(2 * gap.truncation, MAX_TRUNCATION))
    return gap


def find_violation_near_rational(
    x: int,
    y: int,
    eps_grid: Optional[Sequence[float]] = None,
) -> DegradabilityWitness:
    """Scan q' = x/y + eps over the grid for a certified negative gap."""
    m1, m2, n_zero = witness_orders(x, y)
    q = x / y
    tried = []
    for eps in sorted(eps_grid or DEFAULT_EPS_GRID, reverse=True):
        q_prime = q + eps
        gap = certified_gap(q_prime, m1, m2)
        tried.append({"eps": eps, "upper": gap.upper, "truncation": gap.truncation})
        logger.debug("q'=%.12g: gap in [%.6g, %.6g]", q_prime, gap.lower, gap.upper)
        if gap.upper < -NEGATIVE_TOL:
            return DegradabilityWitness(
                q_prime,
                WitnessKind.RELATIVE_ENTROPY,
                gap.upper,
                {
                    "m1":         m1,
                    "m2":         m2,
                    "n_zero":     n_zero,
                    "eps":        eps,
                    "gap_lower":  gap.lower,
                    "gap_upper":  gap.upper,
                    "truncation": gap.truncation,
                },
            )
    raise WitnessNotFound(
        f"no certified negative gap near q = {x}/{y}",
        {"m1": m1, "m2": m2, "n_zero": n_zero, "tried": tried},
    )
