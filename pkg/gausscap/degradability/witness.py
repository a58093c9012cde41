"""
Degradability Witness Record
============================
A witness certifies that no degrading map exists for a given q: either a
convex combination of Gamma images with a negative |1><1| entry (q < 1) or a
negative relative-entropy gap between amplifier outputs (q > 1).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

NEGATIVE_TOL = 1e-7


class WitnessKind(Enum):
    NEGATIVITY       = "negativity"
    RELATIVE_ENTROPY = "relative_entropy"


@dataclass(frozen=True)
class DegradabilityWitness:
    q: float
    kind: WitnessKind
    value: float                      # c value or upper end of the gap interval
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.value < -NEGATIVE_TOL

    def revalidate(self) -> bool:
        """Recompute the witnessed quantity from scratch and check its sign."""
        if self.kind is WitnessKind.NEGATIVITY:
            from gausscap.degradability.gamma import c_coefficient

            value = c_coefficient(self.q, self.detail["n"], self.detail["m"])
        else:
            from gausscap.degradability.amplifier import relative_entropy_gap

            value = relative_entropy_gap(
                self.q, self.detail["m1"], self.detail["m2"], self.detail["truncation"]
            ).upper
        return value < -NEGATIVE_TOL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q":         self.q,
            "kind":      self.kind.value,
            "value":     self.value,
            "certified": self.certified,
            **self.detail,
        }
