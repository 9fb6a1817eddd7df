from typing import NamedTuple


class Transition(NamedTuple):
    from_aoi: str
    to_aoi: str

    @property
    def is_self(self) -> bool:
        return self.from_aoi == self.to_aoi
