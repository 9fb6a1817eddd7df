import math
from dataclasses import dataclass
from typing import Tuple

from gazetna.gtna import GazeTna
from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class GroupSample(JsonRepr):
    group_label: str
    values: Tuple[float, ...]

    def __post_init__(self):
        for value in self.values:
            if not math.isfinite(value):
                raise GazeTna.DataError(f'Group {self.group_label!r} has a non-finite value: {value}')


@dataclass(frozen=True, repr=False)
class Summary(JsonRepr):
    median: float
    q1: float
    q3: float
    n: int = 0
