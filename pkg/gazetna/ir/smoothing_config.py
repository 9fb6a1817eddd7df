from dataclasses import dataclass

from gazetna.gtna import GazeTna
from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class SmoothingConfig(JsonRepr):
    alpha: float = GazeTna.DEFAULT_ALPHA
    smooth_empty_rows: bool = False

    def __post_init__(self):
        if not self.alpha >= 0:
            raise GazeTna.ConfigError(f'Smoothing alpha must be non-negative, got {self.alpha}')
