"""
Gaussian Channels
=================
Two-mode unitaries U^(q) in canonical form, their block dilations
S = [[M, N], [O, P]] (rows B, F; columns A, E), and the one-mode channels
they induce on the sender once the helper's state V_E is fixed:

  effective      X = M, Y = N V_E N^T    (A -> B)
  complementary  X = O, Y = P V_E P^T    (A -> F)

One-mode channels are classified into the canonical families
A1, A2, B1, B2, C_att, C_amp and D.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np

from gausscap.core.symplectic import (
    EQUALITY_TOL,
    VALIDITY_TOL,
    CovarianceMatrix,
    GaussianState,
    rotation,
    symplectic_form,
)
from gausscap.errors import DimensionMismatch, DomainError, NotCompletelyPositive

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CLASSIFY_TOL = EQUALITY_TOL
Z = np.diag([1.0, -1.0])


# ── Dilations ──────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class SymplecticDilation:
    """Symplectic matrix acting on A (n_a modes) and E (n_e modes).

    Output ordering is B (n_a modes) followed by F (n_e modes).
    """

    S: np.ndarray
    n_a: int = 1
    n_e: int = 1

    def __post_init__(self):
        matrix = np.array(self.S, dtype=float)
        size = 2 * (self.n_a + self.n_e)
        if matrix.shape != (size, size):
            raise DimensionMismatch(f"S must be {size}x{size}, got {matrix.shape}")
        sigma = symplectic_form(self.n_a + self.n_e)
        defect = np.abs(matrix @ sigma @ matrix.T - sigma).max()
        if defect > VALIDITY_TOL:
            raise DomainError(f"S is not symplectic (defect {defect:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "S", matrix)

    @property
    def M(self) -> np.ndarray:
        k = 2 * self.n_a
        return self.S[:k, :k]

    @property
    def N(self) -> np.ndarray:
        k = 2 * self.n_a
        return self.S[:k, k:]

    @property
    def O(self) -> np.ndarray:  # noqa: E743
        k = 2 * self.n_a
        return self.S[k:, :k]

    @property
    def P(self) -> np.ndarray:
        k = 2 * self.n_a
        return self.S[k:, k:]

    def evolve(self, v_a: CovarianceMatrix, v_e: CovarianceMatrix) -> CovarianceMatrix:
        """Joint output CM S (V_A + V_E) S^T of B and F."""
        if v_a.n_modes != self.n_a or v_e.n_modes != self.n_e:
            raise DimensionMismatch("input CMs do not match the dilation's mode counts")
        joint = v_a.direct_sum(v_e).V
        return CovarianceMatrix(self.S @ joint @ self.S.T)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "n_a":    self.n_a,
            "n_e":    self.n_e,
            "blocks": {name: getattr(self, name).tolist() for name in ("M", "N", "O", "P")},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SymplecticDilation":
        b = data["blocks"]
        S = np.block([[np.array(b["M"]), np.array(b["N"])], [np.array(b["O"]), np.array(b["P"])]])
        return cls(S, n_a=data.get("n_a", 1), n_e=data.get("n_e", 1))


class UnitaryKind(Enum):
    BEAM_SPLITTER = "beam_splitter"
    AMPLIFIER     = "amplifier"


@dataclass(frozen=True, eq=False)
class TwoModeUnitary:
    """The canonical two-mode unitary U^(q) and its dilation."""

    q: float
    kind: UnitaryKind
    dilation: SymplecticDilation

    @property
    def r(self) -> float:
        """|r| = sqrt((q-1)/q) of the SU(1,1) disentangling (amplifiers only)."""
        return math.sqrt((self.q - 1) / self.q) if self.kind is UnitaryKind.AMPLIFIER else 0.0

    @property
    def s(self) -> float:
        return math.log(math.sqrt(self.q)) if self.kind is UnitaryKind.AMPLIFIER else 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = self.dilation.to_dict()
        data.update({"q": self.q, "kind": self.kind.value})
        return data


def beam_splitter(q: float) -> TwoModeUnitary:
    """Beam splitter of transmissivity q in (0, 1)."""
    if not 0 < q < 1:
        raise DomainError(f"beam splitter needs 0 < q < 1, got {q}")
    t, u = math.sqrt(q), math.sqrt(1 - q)
    S = np.array([
        [t, 0, -u, 0],
        [0, t, 0, -u],
        [u, 0, t, 0],
        [0, u, 0, t],
    ])
    return TwoModeUnitary(q, UnitaryKind.BEAM_SPLITTER, SymplecticDilation(S))


def two_mode_squeezer(q: float) -> TwoModeUnitary:
    """Two-mode squeezer (phase-insensitive amplifier) of gain q > 1."""
    if not q > 1:
        raise DomainError(f"two-mode squeezer needs q > 1, got {q}")
    t, u = math.sqrt(q), math.sqrt(q - 1)
    S = np.array([
        [t, 0, 0, -u],
        [0, t, -u, 0],
        [0, -u, t, 0],
        [-u, 0, 0, t],
    ])
    return TwoModeUnitary(q, UnitaryKind.AMPLIFIER, SymplecticDilation(S))


def canonical_unitary(q: float) -> TwoModeUnitary:
    """U^(q) for any admissible q: beam splitter below 1, squeezer above."""
    if q <= 0 or q == 1:
        raise DomainError(f"q must be positive and different from 1, got {q}")
    return beam_splitter(q) if q < 1 else two_mode_squeezer(q)


Dilated = Union[SymplecticDilation, TwoModeUnitary]


def as_dilation(w: Dilated) -> SymplecticDilation:
    return w.dilation if isinstance(w, TwoModeUnitary) else w


# ── One-mode channels ──────────────────────────────────────────────────────────
class OmgClass(Enum):
    A1           = "A1"
    A2           = "A2"
    B1           = "B1"
    B2           = "B2"
    C_ATT        = "C_att"
    C_AMP        = "C_amp"
    D            = "D"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class ChannelClass:
    tag: OmgClass
    kappa: Optional[float] = None
    n0: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"class": self.tag.value, "kappa": self.kappa, "n0": self.n0}


def _cp_defect(X: np.ndarray, Y: np.ndarray) -> float:
    sigma = symplectic_form(1)
    hermitian = Y + 0.5j * sigma - 0.5j * X @ sigma @ X.T
    return float(np.linalg.eigvalsh(hermitian).min())


@dataclass(frozen=True, eq=False)
class OmgChannel:
    """One-mode Gaussian channel V -> X V X^T + Y.

    x = det X (signed gain), y = sqrt(det 2Y) (noise in vacuum units) and
    K = (y - |1 - x|)/2 >= 0 is the excess noise over the quantum limit.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)
        if X.shape != (2, 2) or Y.shape != (2, 2):
            raise DimensionMismatch("one-mode channels need 2x2 X and Y")
        if not np.allclose(Y, Y.T, atol=VALIDITY_TOL, rtol=0.0):
            raise NotCompletelyPositive("Y must be symmetric")
        Y = (Y + Y.T) / 2
        defect = _cp_defect(X, Y)
        if defect < -VALIDITY_TOL:
            raise NotCompletelyPositive(f"complete positivity violated (min eig {defect:.3e})")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def x(self) -> float:
        return float(np.linalg.det(self.X))

    @property
    def y(self) -> float:
        return 2.0 * math.sqrt(max(float(np.linalg.det(self.Y)), 0.0))

    @property
    def K(self) -> float:
        return (self.y - abs(1 - self.x)) / 2

    @property
    def channel_class(self) -> ChannelClass:
        return classify_omg(self)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "schema": SCHEMA_VERSION,
            "X":      self.X.tolist(),
            "Y":      self.Y.tolist(),
            "x":      self.x,
            "y":      self.y,
            "K":      self.K,
        }
        data.update(self.channel_class.to_dict())
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OmgChannel":
        return cls(np.array(data["X"]), np.array(data["Y"]))


def effective_channel(w: Dilated, v_e: CovarianceMatrix) -> OmgChannel:
    d = as_dilation(w)
    if d.n_a != 1 or v_e.n_modes != d.n_e:
        raise DimensionMismatch("effective channel needs a one-mode sender and matching V_E")
    return OmgChannel(d.M, d.N @ v_e.V @ d.N.T)


def complementary_channel(w: Dilated, v_e: CovarianceMatrix) -> OmgChannel:
    d = as_dilation(w)
    if d.n_e != 1 or v_e.n_modes != d.n_e:
        raise DimensionMismatch("complementary channel needs a one-mode environment")
    return OmgChannel(d.O, d.P @ v_e.V @ d.P.T)


def apply_channel(
    ch: OmgChannel,
    st: GaussianState,
    offset: Optional[np.ndarray] = None,
) -> GaussianState:
    """d -> X d + offset, V -> X V X^T + Y."""
    if st.cm.n_modes != 1:
        raise DimensionMismatch("one-mode channels act on one-mode states")
    mean = ch.X @ st.mean
    if offset is not None:
        mean = mean + np.asarray(offset, dtype=float)
    cm = CovarianceMatrix(ch.X @ st.cm.V @ ch.X.T + ch.Y)
    return GaussianState(cm, mean)


def squeezed_env_cm(s: float, theta: float = 0.0) -> CovarianceMatrix:
    """Pure squeezed vacuum (1/2) R(theta) diag(e^{2s}, e^{-2s}) R(theta)^T."""
    if not math.isfinite(s):
        raise DomainError(f"squeezing must be finite, got {s}")
    R = rotation(theta)
    return CovarianceMatrix(0.5 * R @ np.diag([math.exp(2 * s), math.exp(-2 * s)]) @ R.T)


# ── Classification ─────────────────────────────────────────────────────────────
def canonical_channel(tag: OmgClass, kappa: Optional[float] = None, n0: float = 0.0) -> OmgChannel:
    """Representative (X, Y) of a class with thermal parameter n0."""
    if n0 < 0:
        raise DomainError(f"N0 must be >= 0, got {n0}")
    I = np.eye(2)
    noise = n0 + 0.5
    if tag is OmgClass.A1:
        return OmgChannel(np.zeros((2, 2)), noise * I)
    if tag is OmgClass.A2:
        return OmgChannel(np.diag([1.0, 0.0]), noise * I)
    if tag is OmgClass.B1:
        return OmgChannel(I, np.diag([1.0, 0.0]) / (2 * (2 * n0 + 1)))
    if tag is OmgClass.B2:
        return OmgChannel(I, n0 * I)
    if kappa is None:
        raise DomainError(f"class {tag.value} needs kappa")
    if tag is OmgClass.C_ATT and 0 < kappa < 1:
        return OmgChannel(math.sqrt(kappa) * I, (1 - kappa) * noise * I)
    if tag is OmgClass.C_AMP and kappa > 1:
        return OmgChannel(math.sqrt(kappa) * I, (kappa - 1) * noise * I)
    if tag is OmgClass.D and kappa < 0:
        return OmgChannel(math.sqrt(-kappa) * Z, (1 - kappa) * noise * I)
    raise DomainError(f"kappa={kappa} is outside the domain of class {tag.value}")


def classify_omg(ch: OmgChannel) -> ChannelClass:
    """Canonical family of a one-mode channel with its kappa and N0.

    The family is fixed by kappa = det X and the ranks of X and Y; N0 is read
    from the symplectic invariant sqrt(det Y).
    """
    kappa = ch.x
    root_det_y = math.sqrt(max(float(np.linalg.det(ch.Y)), 0.0))

    if np.abs(ch.X).max() < CLASSIFY_TOL:
        tag, n0, kappa = OmgClass.A1, root_det_y - 0.5, None
    elif abs(kappa) < CLASSIFY_TOL:
        tag, n0, kappa = OmgClass.A2, root_det_y - 0.5, None
    elif abs(kappa - 1) < CLASSIFY_TOL:
        if np.abs(ch.Y).max() < CLASSIFY_TOL:
            tag, n0 = OmgClass.B2, 0.0
        elif root_det_y < CLASSIFY_TOL:
            tag, n0 = OmgClass.B1, (1 / (2 * float(np.trace(ch.Y))) - 1) / 2
        else:
            tag, n0 = OmgClass.B2, root_det_y
        kappa = None
    elif 0 < kappa < 1:
        tag, n0 = OmgClass.C_ATT, root_det_y / (1 - kappa) - 0.5
    elif kappa > 1:
        tag, n0 = OmgClass.C_AMP, root_det_y / (kappa - 1) - 0.5
    else:
        tag, n0 = OmgClass.D, root_det_y / (1 - kappa) - 0.5

    if n0 < -CLASSIFY_TOL:
        logger.warning("channel with kappa=%s gives N0=%.3e < 0; left unclassified", kappa, n0)
        return ChannelClass(OmgClass.UNCLASSIFIED, kappa, None)
    return ChannelClass(tag, kappa, max(n0, 0.0))
