from dataclasses import dataclass

from gazetna.ir.json_repr import JsonRepr
from gazetna.ir.role import FixationKind, Role


@dataclass(frozen=True, repr=False)
class FixationRecord(JsonRepr):
    session_id: str
    participant_id: str
    role: Role
    start_ms: int
    end_ms: int
    object_id: str
    kind: FixationKind = FixationKind.fixation

    @property
    def is_fixation(self) -> bool:
        return self.kind is FixationKind.fixation

    @property
    def merged_count(self) -> int:
        return 1
