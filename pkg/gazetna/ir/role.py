from enum import Enum

from gazetna.gtna import GazeTna


class Role(Enum):
    Airway = 'Airway'
    CPR = 'CPR'
    Defib = 'Defib'
    TeamLead = 'TeamLead'

    @staticmethod
    def parse(text: str, line: int = None) -> 'Role':
        try:
            return Role(str(text).strip())
        except ValueError:
            raise GazeTna.InputError(f'Sorry, I can\'t recognize role: {text}', line, 'role')


class FixationKind(Enum):
    fixation = 'fixation'
    saccade = 'saccade'

    @staticmethod
    def parse(text: str, line: int = None) -> 'FixationKind':
        try:
            return FixationKind(str(text).strip())
        except ValueError:
            raise GazeTna.InputError(f'Sorry, I can\'t recognize event kind: {text}', line, 'kind')
