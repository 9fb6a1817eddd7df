from dataclasses import dataclass
from typing import Optional, Tuple

from gazetna.ir.json_repr import JsonRepr
from gazetna.ir.role import Role


@dataclass(frozen=True, repr=False)
class TnaMetrics(JsonRepr):
    aoi_order: Tuple[str, ...]
    entropy: Optional[float]
    per_aoi_entropy: Tuple[Optional[float], ...]
    self_loop_rate: float
    cross_scan_rate: float
    weights: Tuple[float, ...]
    n_fixations: int
    n_transitions: int
    effective_rows: int = 0
    per_aoi_self_loop: Tuple[float, ...] = ()
    participant_id: str = ''
    role: Optional[Role] = None
    stage_label: Optional[str] = None
    session_id: str = ''

    def value(self, metric: str) -> Optional[float]:
        if metric == 'entropy':
            return self.entropy
        if metric == 'self_loop':
            return self.self_loop_rate
        if metric == 'cross_scan':
            return self.cross_scan_rate
        if metric == 'n_fixations':
            return float(self.n_fixations)
        if metric == 'n_transitions':
            return float(self.n_transitions)
        raise KeyError(metric)
