"""
Analytic Output Spectra
=======================
Closed-form photon-number distributions produced by U^(q) when the helper
sends a single photon:

  - bs_output_spectrum   beam splitter on |n>|1>, l photons reaching F
  - c_mn                 amplifier weights of |n+m> (B) and |n+1> (F)
  - amp_channel_spectra  diagonal spectra of N(|m><m|) and its complement

bs_output_spectrum only uses +, -, *, / and integer binomials, so it accepts
fractions.Fraction as well as float.
"""

import math
from fractions import Fraction
from typing import List, Tuple, Union

import numpy as np

from gausscap.errors import DomainError

Number = Union[float, Fraction]

MAX_AMP_TERMS = 100_000


def bs_output_spectrum(q: Number, n: int) -> List[Number]:
    """p_l for l = 0..n+1: probability that l photons of U|n>|1> exit in F.

    p_l = C(n+1, l) (1-q)^l q^(n-l) ((n+1)(1-q) - l)^2 / ((n+1)(1-q))
    """
    if not 0 < q < 1:
        raise DomainError(f"beam splitter needs 0 < q < 1, got {q}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    loss = 1 - q
    scale = (n + 1) * loss
    out = []
    for l in range(n + 2):
        out.append(math.comb(n + 1, l) * loss ** l * q ** (n - l) * (scale - l) ** 2 / scale)
    return out


def c_mn(q: float, m: int, n: int) -> float:
    """((n+1-m(q-1))^2 / ((n+1) q^(m+2))) C(n+m, m) ((q-1)/q)^n."""
    if not q > 1:
        raise DomainError(f"amplifier needs q > 1, got {q}")
    if m < 0 or n < 0:
        raise DomainError(f"m and n must be >= 0, got m={m}, n={n}")
    head = (n + 1 - m * (q - 1)) ** 2 / ((n + 1) * q ** (m + 2))
    # log-space keeps large n finite
    log_tail = math.log(math.comb(n + m, m)) + n * math.log((q - 1) / q)
    return head * math.exp(log_tail)


def log_c_mn(q: float, m: int, n: int) -> float:
    """ln c_mn, -inf where the prefactor (n+1-m(q-1))^2 vanishes; never underflows."""
    if not q > 1:
        raise DomainError(f"amplifier needs q > 1, got {q}")
    if m < 0 or n < 0:
        raise DomainError(f"m and n must be >= 0, got m={m}, n={n}")
    root = n + 1 - m * (q - 1)
    if root == 0:
        return -math.inf
    return (
        2 * math.log(abs(root))
        - math.log(n + 1)
        - (m + 2) * math.log(q)
        + math.log(math.comb(n + m, m))
        + n * math.log((q - 1) / q)
    )


def amp_atom(q: float, m: int) -> float:
    """Weight m|r|^2 e^{-2ms} = m (q-1)/q^(m+1) of the single-photon-loss term."""
    return m * (q - 1) / q ** (m + 1)


def amp_terms(q: float, m: int, tol: float = 1e-12) -> np.ndarray:
    """c_mn for n = 0, 1, ... until the missing mass drops below tol."""
    remaining = 1.0 - amp_atom(q, m)
    terms = []
    n = 0
    while remaining > tol:
        if n >= MAX_AMP_TERMS:
            raise DomainError(f"amplifier series for q={q}, m={m} did not reach tol={tol}")
        c = c_mn(q, m, n)
        terms.append(c)
        remaining -= c
        n += 1
    return np.array(terms)


def amp_channel_spectra(q: float, m: int, tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonals of N(|m><m|) on B and of the complementary output on F.

    B: atom at |m-1>, c_mn at |n+m>.  F: atom at |0>, c_mn at |n+1>.
    """
    atom = amp_atom(q, m)
    terms = amp_terms(q, m, tol)

    out_b = np.zeros(m + len(terms))
    out_b[m:] = terms
    if m > 0:
        out_b[m - 1] += atom

    out_f = np.zeros(len(terms) + 1)
    out_f[1:] = terms
    out_f[0] = atom
    return out_b, out_f
