from dataclasses import dataclass

from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class StageAnnotation(JsonRepr):
    session_id: str
    stage_label: str
    start_ms: int
    end_ms: int

    def contains(self, timestamp_ms: int) -> bool:
        # half-open [start, end)
        return self.start_ms <= timestamp_ms < self.end_ms
