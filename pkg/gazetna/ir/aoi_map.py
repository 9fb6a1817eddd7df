from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from gazetna.gtna import GazeTna
from gazetna.ir.json_repr import JsonRepr


@dataclass(frozen=True, repr=False)
class AoiMap(JsonRepr):
    aoi_order: Tuple[str, ...]
    entries: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.aoi_order)) != len(self.aoi_order):
            raise GazeTna.ValidationError(f'AOI order has duplicate labels: {list(self.aoi_order)}')
        if len(self.aoi_order) < 2:
            raise GazeTna.ValidationError(f'AOI order needs at least 2 labels, got {list(self.aoi_order)}')
        declared = set(self.aoi_order)
        for object_id, label in self.entries.items():
            if label not in declared:
                raise GazeTna.ValidationError(f'AOI label {label!r} of object {object_id!r} is not declared')

    def label(self, object_id: str) -> Optional[str]:
        return self.entries.get(object_id)

    def index(self, label: str) -> int:
        return self.aoi_order.index(label)

    @property
    def size(self) -> int:
        return len(self.aoi_order)

    @staticmethod
    def identity(labels: Iterable[str] = GazeTna.DEFAULT_AOIS) -> 'AoiMap':
        labels = tuple(labels)
        return AoiMap(labels, {label: label for label in labels})
