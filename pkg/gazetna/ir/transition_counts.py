from dataclasses import dataclass
from typing import Tuple

import numpy as np

from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False, eq=False)
class TransitionCounts(JsonRepr):
    aoi_order: Tuple[str, ...]
    counts: np.ndarray
    fixation_totals: np.ndarray
    sequences: int = 1

    def __post_init__(self):
        self.counts.setflags(write=False)
        self.fixation_totals.setflags(write=False)

    @property
    def n_transitions(self) -> int:
        return int(self.counts.sum())

    @property
    def n_fixations(self) -> int:
        return int(self.fixation_totals.sum())

    @property
    def row_support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def source_totals(self) -> np.ndarray:
        """Outgoing transition tallies, the alternative self-loop weighting."""
        return self.row_support
