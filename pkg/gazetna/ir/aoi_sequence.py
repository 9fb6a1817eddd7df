from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from gazetna.ir.json_repr import JsonRepr
from gazetna.ir.merged_fixation import MergedFixation
from gazetna.ir.role import Role


@dataclass(frozen=True, repr=False)
class AoiSequence(JsonRepr):
    participant_id: str
    role: Role
    fixations: Tuple[MergedFixation, ...] = field(default_factory=tuple)
    stage_label: Optional[str] = None
    session_id: str = ''
    dropped: int = 0

    @property
    def labels(self) -> List[str]:
        return [fixation.aoi for fixation in self.fixations]

    def __len__(self):
        return len(self.fixations)

    @property
    def key(self) -> Tuple[str, str, str, str]:
        return (self.participant_id, self.role.value, self.stage_label or '', self.session_id)
