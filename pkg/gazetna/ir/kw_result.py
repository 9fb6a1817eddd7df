from dataclasses import dataclass

from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class KwResult(JsonRepr):
    h_statistic: float
    df: int
    p_value: float
    tie_correction: float
    n: int = 0
