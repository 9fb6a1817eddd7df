from dataclasses import asdict, is_dataclass
from enum import Enum
from json import dumps
from pathlib import PurePath
from typing import Any

import numpy as np


def plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, PurePath):
        return str(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if is_dataclass(value) and not isinstance(value, type):
        return plain(asdict(value))
    return value


class JsonRepr:

    def as_dict(self) -> dict:
        return plain(self)

    def __repr__(self) -> str:
        return dumps(self.as_dict())
