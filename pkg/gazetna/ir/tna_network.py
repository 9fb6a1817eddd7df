from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class NetworkNode(JsonRepr):
    aoi_label: str
    fixation_total: int
    raw_self_loop_prob: float


@dataclass(frozen=True, repr=False)
class NetworkEdge(JsonRepr):
    source: str
    target: str
    probability: float
    raw_count: int

    @property
    def is_self_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True, repr=False)
class TnaNetwork(JsonRepr):
    nodes: Tuple[NetworkNode, ...] = ()
    edges: Tuple[NetworkEdge, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)

    def node(self, label: str) -> Optional[NetworkNode]:
        for node in self.nodes:
            if node.aoi_label == label:
                return node
        return None

    def probability(self, source: str, target: str) -> float:
        for edge in self.edges:
            if edge.source == source and edge.target == target:
                return edge.probability
        return 0.0
