from dataclasses import dataclass, replace
from typing import Optional

from gazetna.ir.json_repr import JsonRepr
from gazetna.ir.role import Role


@dataclass(frozen=True, repr=False)
class MergedFixation(JsonRepr):
    participant_id: str
    role: Role
    object_id: str
    start_ms: int
    end_ms: int
    merged_count: int = 1
    aoi: Optional[str] = None
    session_id: str = ''

    def mapped(self, aoi: str) -> 'MergedFixation':
        return replace(self, aoi=aoi)
