from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from gazetna.gtna import GazeTna
from gazetna.ir.json_repr import JsonRepr

GROUP_KEYS = ('participant', 'role', 'stage')
OUTPUT_FORMATS = ('csv', 'json', 'dot')
INPUT_FORMATS = ('csv', 'jsonl')


@dataclass(frozen=True, repr=False)
class RunConfig(JsonRepr):
    fixations: Optional[Path] = None
    aoi_map: Optional[Path] = None
    stages: Optional[Path] = None
    input_format: str = 'csv'
    alpha: float = GazeTna.DEFAULT_ALPHA
    gap_ms: int = GazeTna.DEFAULT_GAP_MS
    entropy_renormalize: bool = True
    entropy_include_self: bool = False
    smooth_empty_rows: bool = False
    group_by: Tuple[str, ...] = ('participant', 'role')
    output_dir: Path = Path('tna-out')
    formats: Tuple[str, ...] = ('csv', 'json')
    min_prob: float = GazeTna.DEFAULT_MIN_PROB
    motif_threshold: float = GazeTna.DEFAULT_MOTIF_THRESHOLD
    seed: Optional[int] = None
    full_precision: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.alpha < 0:
            raise GazeTna.ConfigError(f'alpha must be non-negative, got {self.alpha}')
        if self.gap_ms < 0:
            raise GazeTna.ConfigError(f'gap_ms must be non-negative, got {self.gap_ms}')
        if self.input_format not in INPUT_FORMATS:
            raise GazeTna.ConfigError(f'Sorry, I can\'t recognize input format: {self.input_format}')
        for key in self.group_by:
            if key not in GROUP_KEYS:
                raise GazeTna.ConfigError(f'Sorry, I can\'t group by: {key}')
        for output_format in self.formats:
            if output_format not in OUTPUT_FORMATS:
                raise GazeTna.ConfigError(f'Sorry, I can\'t write format: {output_format}')
        if not 0 <= self.min_prob < 1:
            raise GazeTna.ConfigError(f'min_prob must be in [0, 1), got {self.min_prob}')
        if not 0 < self.motif_threshold <= 1:
            raise GazeTna.ConfigError(f'motif threshold must be in (0, 1], got {self.motif_threshold}')
        if self.workers < 1:
            raise GazeTna.ConfigError(f'workers must be positive, got {self.workers}')

    @property
    def by_participant(self) -> bool:
        return 'participant' in self.group_by

    @property
    def by_role(self) -> bool:
        return 'role' in self.group_by

    @property
    def by_stage(self) -> bool:
        return 'stage' in self.group_by
