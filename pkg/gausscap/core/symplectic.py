"""
Symplectic Core
===============
Covariance-matrix representation of Gaussian states and the entropy
primitives every capacity formula is built from.

Conventions:
  - quadrature ordering (q_1, p_1, q_2, p_2, ...)
  - vacuum covariance matrix = I/2, so a valid CM obeys V + (i/2)Sigma >= 0
  - entropies in nats, 0 ln 0 := 0
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import block_diag
from scipy.special import entr, rel_entr

from gausscap.errors import DomainError, InvalidCovarianceMatrix

VALIDITY_TOL = 1e-10   # symmetry, uncertainty relation, nu >= 1/2
EQUALITY_TOL = 1e-8    # comparisons between computed spectra
NORMALIZATION_TOL = 1e-9

_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of n_modes copies of [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise DomainError(f"n_modes must be positive, got {n_modes}")
    return block_diag(*([_OMEGA] * n_modes))


def _modes_of(matrix: np.ndarray) -> int:
    rows, cols = matrix.shape
    if rows != cols or rows % 2:
        raise InvalidCovarianceMatrix(f"expected an even square matrix, got {matrix.shape}")
    return rows // 2


def _symmetric_part(matrix: np.ndarray) -> np.ndarray:
    if not np.allclose(matrix, matrix.T, atol=VALIDITY_TOL, rtol=0.0):
        raise InvalidCovarianceMatrix("matrix is not symmetric")
    return (matrix + matrix.T) / 2


def symplectic_spectrum(matrix: np.ndarray) -> np.ndarray:
    """|eig(i Sigma V)| with each conjugate pair counted once, descending.

    Works for any symmetric positive matrix, not only physical CMs.
    """
    matrix = _symmetric_part(np.asarray(matrix, dtype=float))
    n = _modes_of(matrix)
    eig = np.linalg.eigvals(1j * symplectic_form(n) @ matrix)
    values = np.sort(np.abs(eig))[::-1]
    # eigenvalues come in +/- pairs; average each pair
    return (values[0::2] + values[1::2]) / 2


# ── Domain types ───────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Second-moment matrix of an n-mode Gaussian state (vacuum = I/2)."""

    V: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        matrix = np.array(self.V, dtype=float)
        n = _modes_of(matrix)
        matrix = _symmetric_part(matrix)
        hermitian = matrix + 0.5j * symplectic_form(n)
        lowest = float(np.linalg.eigvalsh(hermitian).min())
        if lowest < -VALIDITY_TOL:
            raise InvalidCovarianceMatrix(
                f"uncertainty relation violated: min eig(V + i Sigma/2) = {lowest:.3e}"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "V", matrix)
        object.__setattr__(self, "n_modes", n)

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "CovarianceMatrix":
        return cls(0.5 * np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, n_bar: float, n_modes: int = 1) -> "CovarianceMatrix":
        if n_bar < 0:
            raise DomainError(f"thermal occupation must be >= 0, got {n_bar}")
        return cls((n_bar + 0.5) * np.eye(2 * n_modes))

    def direct_sum(self, other: "CovarianceMatrix") -> "CovarianceMatrix":
        return CovarianceMatrix(block_diag(self.V, other.V))

    def mean_photons(self) -> float:
        """Mean photon number per mode, Tr V / (2n) - 1/2."""
        return float(np.trace(self.V)) / (2 * self.n_modes) - 0.5


@dataclass(frozen=True, eq=False)
class GaussianState:
    cm: CovarianceMatrix
    mean: Optional[np.ndarray] = None  # zero vector when omitted

    def __post_init__(self):
        size = 2 * self.cm.n_modes
        mean = np.zeros(size) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (size,) or not np.all(np.isfinite(mean)):
            raise DomainError(f"mean must be a finite vector of length {size}")
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)


@dataclass(frozen=True)
class EnergyBudget:
    """Mean photon numbers per mode available to sender (p_a) and helper (p_e)."""

    p_a: float
    p_e: float

    def __post_init__(self):
        for name in ("p_a", "p_e"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be a finite nonnegative number, got {value}")


# ── Spectra and entropies ──────────────────────────────────────────────────────
def symplectic_eigenvalues(cm: CovarianceMatrix) -> List[float]:
    return [float(nu) for nu in symplectic_spectrum(cm.V)]


def symplectic_trace(matrix: np.ndarray) -> float:
    """Sum of the symplectic eigenvalues of a positive definite matrix."""
    matrix = _symmetric_part(np.asarray(matrix, dtype=float))
    if np.linalg.eigvalsh(matrix).min() <= 0:
        raise DomainError("symplectic trace needs a positive definite matrix")
    return float(symplectic_spectrum(matrix).sum())


def g_entropy(x: float) -> float:
    """g(x) = (x+1/2)ln(x+1/2) - (x-1/2)ln(x-1/2), defined for x >= 1/2.

    Entropy of a one-mode thermal state with symplectic eigenvalue x.
    """
    if x < 0.5 - VALIDITY_TOL:
        raise DomainError(f"g is defined for x >= 1/2, got {x}")
    x = max(x, 0.5)
    return float(-entr(x + 0.5) + entr(x - 0.5))


def g_occupation(n: float) -> float:
    """g evaluated by mean occupation: (n+1)ln(n+1) - n ln n."""
    if n < -VALIDITY_TOL:
        raise DomainError(f"occupation must be >= 0, got {n}")
    return g_entropy(max(n, 0.0) + 0.5)


def entropy_gaussian(cm: CovarianceMatrix) -> float:
    return math.fsum(g_entropy(nu) for nu in symplectic_eigenvalues(cm))


def entropy_of_matrix(matrix: np.ndarray) -> float:
    """Entropy of a raw CM-shaped matrix, validating it first."""
    return entropy_gaussian(CovarianceMatrix(matrix))


def relative_entropy_diagonal(p: Sequence[float], r: Sequence[float]) -> float:
    """D(p || r) for commuting (diagonal) states; +inf on support failure."""
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    if p.shape != r.shape:
        raise DomainError(f"length mismatch {p.shape} vs {r.shape}")
    if np.any(p < 0) or np.any(r < 0):
        raise DomainError("probabilities must be nonnegative")
    for name, vec in (("p", p), ("r", r)):
        if abs(vec.sum() - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"{name} is not normalized (sum = {vec.sum():.12f})")
    return float(math.fsum(rel_entr(p, r)))


# ── One-mode generators ────────────────────────────────────────────────────────
def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def single_mode_squeezing(s: float) -> np.ndarray:
    return np.diag([math.exp(s), math.exp(-s)])
