from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from gazetna.ir.json_repr import JsonRepr


class MotifKind(Enum):
    dyad = 'dyad'
    triad = 'triad'


@dataclass(frozen=True, repr=False)
class Motif(JsonRepr):
    kind: MotifKind
    members: Tuple[str, ...]
    min_edge_prob: float
