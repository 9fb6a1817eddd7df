from dataclasses import dataclass
from typing import Tuple

import numpy as np

from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False, eq=False)
class TransitionMatrix(JsonRepr):
    aoi_order: Tuple[str, ...]
    probs: np.ndarray
    row_support: np.ndarray
    alpha: float = 0.0

    def __post_init__(self):
        self.probs.setflags(write=False)
        self.row_support.setflags(write=False)

    @property
    def active_rows(self) -> np.ndarray:
        """Rows carrying a distribution (non-empty, or smoothed when empty)."""
        return self.probs.sum(axis=1) > 0

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.probs).copy()
