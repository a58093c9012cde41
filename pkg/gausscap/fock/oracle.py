"""
Truncated Fock Oracle
=====================
Dense representation of U^(q) on two truncated modes, used to check the
Gaussian formulas against a computation that knows nothing about
covariance matrices.

Both unitaries conserve a photon-number label (the total n_a + n_b for the
beam splitter, the difference n_a - n_b for the squeezer), so operators are
stored as one dense block per label. Basis ordering is |n_a, n_b> ->
n_a * D + n_b.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, expm
from scipy.special import entr

from gausscap.errors import DimensionMismatch, DomainError, FockTruncationError

logger = logging.getLogger(__name__)

DEFAULT_TAIL_TOL = 1e-10
LEAK_TOL         = 1e-6
STATE_TOL        = 1e-10
WEIGHT_FLOOR     = 1e-18
CHUNK            = 256

Block = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class TruncatedFockSpace:
    """Basis |0>..|D-1> per mode."""

    cutoff: int
    n_modes: int = 1

    def __post_init__(self):
        if self.cutoff < 2:
            raise DomainError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.n_modes not in (1, 2):
            raise DomainError(f"only one or two modes are supported, got {self.n_modes}")

    @property
    def dim(self) -> int:
        return self.cutoff ** self.n_modes

    def index(self, *occupations: int) -> int:
        if len(occupations) != self.n_modes:
            raise DimensionMismatch(f"expected {self.n_modes} occupations")
        idx = 0
        for n in occupations:
            if not 0 <= n < self.cutoff:
                raise DomainError(f"occupation {n} outside cutoff {self.cutoff}")
            idx = idx * self.cutoff + n
        return idx


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Block-diagonal operator; basis states outside every block map to 0."""

    space: TruncatedFockSpace
    blocks: Tuple[Block, ...]

    @classmethod
    def from_dense(cls, space: TruncatedFockSpace, matrix: np.ndarray) -> "FockOperator":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise DimensionMismatch(f"matrix must be {space.dim}x{space.dim}")
        return cls(space, ((np.arange(space.dim), matrix),))

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """U v for a vector, or for each column of a matrix."""
        vectors = np.asarray(vectors)
        if vectors.shape[0] != self.space.dim:
            raise DimensionMismatch(f"expected leading dimension {self.space.dim}")
        out = np.zeros(vectors.shape, dtype=complex)
        for idx, block in self.blocks:
            out[idx] += block @ vectors[idx]
        return out

    def column(self, *occupations: int) -> np.ndarray:
        e = np.zeros(self.space.dim, dtype=complex)
        e[self.space.index(*occupations)] = 1.0
        return self.apply(e)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.space.dim, self.space.dim), dtype=complex)
        for idx, block in self.blocks:
            dense[np.ix_(idx, idx)] += block
        return dense

    @property
    def matrix(self) -> np.ndarray:
        return self.to_dense()


def ladder_ops(D: int) -> Tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation and creation operators, a|n> = sqrt(n)|n-1>."""
    TruncatedFockSpace(D)
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1)
    return a, a.T.copy()


# ── Unitaries ──────────────────────────────────────────────────────────────────
def beam_splitter_unitary_fock(q: float, D: int) -> FockOperator:
    """exp(arccos(sqrt q) (a^dag b - a b^dag)), exact on every block n_a + n_b < D."""
    if not 0 < q < 1:
        raise DomainError(f"beam splitter needs 0 < q < 1, got {q}")
    space = TruncatedFockSpace(D, 2)
    theta = math.acos(math.sqrt(q))
    blocks: List[Block] = []
    for total in range(D):
        idx = np.array([space.index(n, total - n) for n in range(total + 1)])
        gen = np.zeros((total + 1, total + 1))
        for n in range(total):
            # a^dag b: |n, total-n> -> sqrt((n+1)(total-n)) |n+1, total-n-1>
            amp = math.sqrt((n + 1) * (total - n))
            gen[n + 1, n] = amp
            gen[n, n + 1] = -amp
        blocks.append((idx, expm(theta * gen).astype(complex)))
    return FockOperator(space, tuple(blocks))


def _raising_exp(sub: Sequence[float], r: complex) -> np.ndarray:
    """exp(r R) for R with subdiagonal ``sub`` and zeros elsewhere.

    R is nilpotent, so the power series terminates:
    exp(r R)[j, i] = r^(j-i) / (j-i)! * prod(sub[i:j]).
    """
    size = len(sub) + 1
    out = np.zeros((size, size), dtype=complex)
    for i in range(size):
        value = 1.0 + 0j
        out[i, i] = value
        for j in range(i + 1, size):
            value *= r * sub[j - 1] / (j - i)
            out[j, i] = value
    return out


def squeezer_unitary_fock(
    q: float,
    D: int,
    method: str = "disentangled",
    tol: Optional[float] = None,
) -> FockOperator:
    """exp(i arccosh(sqrt q) (a^dag b^dag + a b)) on two truncated modes.

    The default evaluates e^{r a^dag b^dag} e^{-s(a^dag a + b b^dag)} e^{r a b}
    with r = i sqrt((q-1)/q), s = ln sqrt q; each column is then the exact
    column projected on the truncated space. ``method="direct"`` takes the
    matrix exponential of the truncated generator instead. With ``tol`` set,
    columns with n_a + n_b <= D/2 must keep their norm within tol.
    """
    if not q > 1:
        raise DomainError(f"two-mode squeezer needs q > 1, got {q}")
    if method not in ("disentangled", "direct"):
        raise DomainError(f"unknown method {method!r}")
    space = TruncatedFockSpace(D, 2)
    tau = math.acosh(math.sqrt(q))
    r = 1j * math.sqrt((q - 1) / q)
    s = math.log(math.sqrt(q))

    blocks: List[Block] = []
    for diff in range(-(D - 1), D):
        shift_a, shift_b = max(diff, 0), max(-diff, 0)
        size = D - abs(diff)
        pairs = [(k + shift_a, k + shift_b) for k in range(size)]
        idx = np.array([space.index(na, nb) for na, nb in pairs])
        sub = [math.sqrt((na + 1) * (nb + 1)) for na, nb in pairs[:-1]]
        if method == "direct":
            raise_ = np.diag(sub, k=-1) if sub else np.zeros((1, 1))
            block = expm(1j * tau * (raise_ + raise_.T))
        else:
            up = _raising_exp(sub, r)
            middle = np.exp([-s * (na + nb + 1) for na, nb in pairs])
            # e^{r ab} is the transpose of e^{r a^dag b^dag}
            block = (up * middle) @ up.T
        blocks.append((idx, block))
    op = FockOperator(space, tuple(blocks))

    if tol is not None:
        worst = 0.0
        for na in range(D):
            for nb in range(D - na):
                if na + nb > D // 2:
                    break
                worst = max(worst, abs(np.linalg.norm(op.column(na, nb)) ** 2 - 1))
        if worst > tol:
            raise FockTruncationError("squeezer columns lose norm below D/2", worst, D)
    return op


# ── States ─────────────────────────────────────────────────────────────────────
def fock_state(n: int, D: int) -> np.ndarray:
    idx = TruncatedFockSpace(D).index(n)
    rho = np.zeros((D, D), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def thermal_fock_state(n_bar: float, D: int) -> np.ndarray:
    """Diagonal thermal state truncated at D (trace 1 - (n/(n+1))^D)."""
    if n_bar < 0:
        raise DomainError(f"thermal occupation must be >= 0, got {n_bar}")
    TruncatedFockSpace(D)
    if n_bar == 0:
        return fock_state(0, D)
    n = np.arange(D)
    ratio = n_bar / (n_bar + 1)
    return np.diag(ratio ** n / (n_bar + 1)).astype(complex)


def squeezed_vacuum_ket(s: float, theta: float, D: int) -> np.ndarray:
    """Amplitudes of a squeezed vacuum whose CM is R(theta) diag(e^{2s}, e^{-2s}) R^T / 2."""
    TruncatedFockSpace(D)
    ket = np.zeros(D, dtype=complex)
    ket[0] = 1 / math.sqrt(math.cosh(s))
    factor = np.exp(2j * theta) * math.tanh(s)
    for n in range(0, D - 2, 2):
        ket[n + 2] = ket[n] * factor * math.sqrt((n + 1) * (n + 2)) / (n + 2)
    return ket


def squeezed_vacuum_fock_state(s: float, theta: float, D: int) -> np.ndarray:
    ket = squeezed_vacuum_ket(s, theta, D)
    return np.outer(ket, ket.conj())


def entropy_fock(rho: np.ndarray) -> float:
    """-Tr rho ln rho from the eigenvalues (negative round-off clipped)."""
    eig = np.clip(eigh(rho, eigvals_only=True), 0.0, None)
    return float(math.fsum(entr(eig)))


def required_cutoff(ratio: float, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest D with ratio**D <= tol for a geometric tail."""
    if not 0 <= ratio < 1:
        raise DomainError(f"geometric ratio must lie in [0, 1), got {ratio}")
    if ratio == 0:
        return 2
    return max(2, math.ceil(math.log(tol) / math.log(ratio)))


def thermal_cutoff(n_bar: float, tol: float = DEFAULT_TAIL_TOL) -> int:
    return required_cutoff(n_bar / (n_bar + 1), tol)


# ── Channel pair ───────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class FockChannelOutput:
    rho_b: np.ndarray
    rho_f: np.ndarray
    tail_mass: float


def _check_state(rho: np.ndarray, D: int, name: str, leak_tol: float) -> None:
    if rho.shape != (D, D):
        raise DimensionMismatch(f"{name} must be {D}x{D}, got {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=STATE_TOL):
        raise DomainError(f"{name} is not Hermitian")
    lowest = eigh(rho, eigvals_only=True).min()
    if lowest < -STATE_TOL:
        raise DomainError(f"{name} is not positive (min eig {lowest:.3e})")
    missing = 1 - np.trace(rho).real
    if missing > leak_tol or missing < -STATE_TOL:
        raise FockTruncationError(f"{name} trace differs from 1", missing, D)


def _ensemble(rho: np.ndarray) -> List[Tuple[float, np.ndarray]]:
    weights, vectors = eigh(rho)
    return [(w, vectors[:, i]) for i, w in enumerate(weights) if w > WEIGHT_FLOOR]


def channel_pair_on_state(
    U: FockOperator,
    rho_a: np.ndarray,
    eta_e: np.ndarray,
    leak_tol: float = LEAK_TOL,
) -> FockChannelOutput:
    """Partial traces of U (rho (x) eta) U^dag over F (-> rho_B) and B (-> rho_F)."""
    D = U.space.cutoff
    if U.space.n_modes != 2:
        raise DimensionMismatch("channel pair needs a two-mode operator")
    _check_state(np.asarray(rho_a), D, "rho_A", leak_tol)
    _check_state(np.asarray(eta_e), D, "eta_E", leak_tol)

    products = [
        (pw * ew, np.kron(pv, ev))
        for pw, pv in _ensemble(np.asarray(rho_a))
        for ew, ev in _ensemble(np.asarray(eta_e))
    ]
    rho_b = np.zeros((D, D), dtype=complex)
    rho_f = np.zeros((D, D), dtype=complex)
    for start in range(0, len(products), CHUNK):
        chunk = products[start:start + CHUNK]
        columns = np.stack([math.sqrt(w) * v for w, v in chunk], axis=1)
        psi = U.apply(columns).T.reshape(len(chunk), D, D)
        rho_b += np.einsum("kab,kcb->ac", psi, psi.conj())
        rho_f += np.einsum("kab,kac->bc", psi, psi.conj())

    tail = float(1 - np.trace(rho_b).real)
    logger.debug("channel pair at D=%d: tail mass %.3e", D, tail)
    if tail > leak_tol:
        raise FockTruncationError("output trace leaked beyond tolerance", tail, D)
    return FockChannelOutput(rho_b, rho_f, tail)


def fock_output_entropies(
    U: FockOperator,
    rho_a: np.ndarray,
    eta_e: np.ndarray,
    leak_tol: float = LEAK_TOL,
) -> Tuple[float, float, float]:
    out = channel_pair_on_state(U, rho_a, eta_e, leak_tol)
    return entropy_fock(out.rho_b), entropy_fock(out.rho_f), out.tail_mass
