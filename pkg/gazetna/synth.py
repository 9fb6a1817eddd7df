"""
Synthetic fixation logs drawn from a known AOI transition matrix.

Randomness comes from the PCG64 bit generator (O'Neill's permuted congruential
generator, 128-bit state, 64-bit output) fed by a ``SeedSequence``. Only raw
64-bit outputs are consumed and turned into doubles as ``(x >> 11) * 2**-53``,
so streams do not depend on numpy's distribution code.
"""

import re
from bisect import bisect_right
from dataclasses import replace
from itertools import accumulate
from json import loads
from logging import getLogger
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from gazetna.gtna import GazeTna
from gazetna.ir.aoi_map import AoiMap
from gazetna.ir.fixation_record import FixationRecord
from gazetna.ir.generator_spec import GeneratorSpec
from gazetna.ir.role import FixationKind, Role
from gazetna.ir.stage_annotation import StageAnnotation

logger = getLogger(__name__)

PRESETS_DIR = Path(__file__).parent / 'presets'
PRESET_STAGES = ('stage1', 'stage5')
SACCADE_OBJECT = 'saccade'

# minimum quiet time between the two demo stages of a session
STAGE_BREAK_MS = 60000

_BLOCK = 4096
_UNIT = 2.0 ** -53


class RandomStream:

    def __init__(self, seed: int):
        self._generator = np.random.PCG64(np.random.SeedSequence(seed))
        self._buffer: List[int] = []
        self._position = 0

    def raw(self) -> int:
        if self._position == len(self._buffer):
            self._buffer = self._generator.random_raw(_BLOCK).tolist()
            self._position = 0
        value = self._buffer[self._position]
        self._position += 1
        return value

    def uniform(self) -> float:
        return (self.raw() >> 11) * _UNIT

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return low + min(int(self.uniform() * (high - low + 1)), high - low)

    def choice(self, cumulative: List[float]) -> int:
        index = bisect_right(cumulative, self.uniform() * cumulative[-1])
        return min(index, len(cumulative) - 1)


def object_ids(spec: GeneratorSpec) -> List[List[str]]:
    if spec.objects_per_aoi == 1:
        return [[label] for label in spec.aoi_order]
    return [[f'{_slug(label)}#{k}' for k in range(1, spec.objects_per_aoi + 1)] for label in spec.aoi_order]


def _slug(label: str) -> str:
    return re.sub(r'[^a-z0-9]+', '-', label.lower()).strip('-')


def aoi_map_for(spec: GeneratorSpec) -> AoiMap:
    entries = {}
    for label, objects in zip(spec.aoi_order, object_ids(spec)):
        for object_id in objects:
            entries[object_id] = label
    return AoiMap(tuple(spec.aoi_order), entries)


def generate_chain(spec: GeneratorSpec) -> Tuple[List[int], List[Tuple[int, int, int]]]:
    """AOI indices and (object index, dwell, gap) triples, drawn in a fixed order."""
    stream = RandomStream(spec.seed)
    k = len(spec.aoi_order)
    cumulative = [list(accumulate(row)) for row in spec.transition_probs.tolist()]
    states, draws = [], []
    state = None
    for _ in range(spec.length):
        if state is None:
            state = min(int(stream.uniform() * k), k - 1)
        else:
            state = stream.choice(cumulative[state])
        states.append(state)
        draws.append((stream.integer(0, spec.objects_per_aoi - 1),
                      stream.integer(*spec.dwell_ms),
                      stream.integer(*spec.gap_ms)))
    return states, draws


def generate(spec: GeneratorSpec) -> List[FixationRecord]:
    """
    Fixation records in the ingest schema. The first AOI is uniform, later
    ones follow the transition matrix; each fixation lasts its dwell
    and is followed by its gap (filled by a saccade when ``emit_saccades``).
    """
    objects = object_ids(spec)
    states, draws = generate_chain(spec)
    records = []
    clock = spec.start_ms
    for n, (state, (object_index, dwell, gap)) in enumerate(zip(states, draws)):
        records.append(FixationRecord(spec.session_id, spec.participant_id, spec.role,
                                      clock, clock + dwell, objects[state][object_index]))
        clock += dwell
        if spec.emit_saccades and gap > 0 and n < spec.length - 1:
            records.append(FixationRecord(spec.session_id, spec.participant_id, spec.role,
                                          clock, clock + gap, SACCADE_OBJECT, FixationKind.saccade))
        clock += gap
    logger.debug('generated %d records for %s/%s (seed %d)', len(records),
                 spec.session_id, spec.participant_id, spec.seed)
    return records


def load_generator_spec(source: Union[str, bytes, Path]) -> GeneratorSpec:
    """A spec from a JSON document (the preset file format), or from a path to one."""
    if isinstance(source, Path):
        try:
            source = source.read_text(encoding='utf-8')
        except OSError as e:
            raise GazeTna.ConfigError(f'Sorry, I can\'t read generator spec: {e}')
    try:
        document = loads(source)
        spec = GeneratorSpec(
            aoi_order=tuple(document.get('aoi_order', GazeTna.DEFAULT_AOIS)),
            transition_probs=np.asarray(document['transition_probs'], dtype=float),
            dwell_ms=tuple(document.get('dwell_ms', (150, 900))),
            gap_ms=tuple(document.get('gap_ms', (100, 700))),
            objects_per_aoi=int(document.get('objects_per_aoi', 1)),
            length=int(document.get('length', 400)),
            seed=int(document.get('seed', 0)),
            session_id=str(document.get('session_id', 'sim')),
            participant_id=str(document.get('participant_id', 'p1')),
            role=Role(document.get('role', Role.TeamLead.value)),
            emit_saccades=bool(document.get('emit_saccades', False)))
    except GazeTna.Error:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise GazeTna.ConfigError(f'Malformed generator spec: {e}')
    return spec


def preset_name(role: Role, stage: str) -> str:
    return f'{role.value.lower()}-{stage}'


def preset_names() -> List[str]:
    return [preset_name(role, stage) for role in Role for stage in PRESET_STAGES]


def load_preset(name: str) -> GeneratorSpec:
    if name not in preset_names():
        raise GazeTna.ConfigError(f'Sorry, I can\'t find preset: {name} (known: {", ".join(preset_names())})')
    return load_generator_spec(PRESETS_DIR / f'{name}.json')


def role_preset(role: Role, stage: str) -> GeneratorSpec:
    """
    Illustrative regimes: CPR scans widely (highest entropy), Defib anchors on
    its devices (highest self-loop), TeamLead moves to monitor-anchored
    oversight in stage 5.
    """
    if not isinstance(role, Role):
        raise GazeTna.ConfigError(f'Sorry, I can\'t recognize role: {role}')
    if stage not in PRESET_STAGES:
        raise GazeTna.ConfigError(f'Sorry, I can\'t recognize stage: {stage} (known: {", ".join(PRESET_STAGES)})')
    return load_preset(preset_name(role, stage))


def derive_seed(seed: int, *path: int) -> int:
    state = np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def demo_corpus(seed: int = 0, participants_per_role: int = 10,
                emit_saccades: bool = True) -> Tuple[List[FixationRecord], AoiMap, List[StageAnnotation]]:
    """
    One session per participant slot, four roles per session; each participant
    has a stage-1 segment followed by a stage-5 segment after a break.
    """
    records: List[FixationRecord] = []
    stages: List[StageAnnotation] = []
    roles = list(Role)
    aoi_map = aoi_map_for(role_preset(roles[0], PRESET_STAGES[0]))
    for session in range(1, participants_per_role + 1):
        session_id = f's{session:02d}'
        segments = {role: [] for role in roles}
        stage_start = 0
        for stage_index, stage in enumerate(PRESET_STAGES):
            stage_end = stage_start
            for role_index, role in enumerate(roles):
                spec = replace(role_preset(role, stage),
                               seed=derive_seed(seed, session, role_index, stage_index),
                               session_id=session_id,
                               participant_id=f'{session_id}-{role.value.lower()}',
                               role=role,
                               start_ms=stage_start,
                               emit_saccades=emit_saccades)
                generated = generate(spec)
                segments[role].extend(generated)
                if generated:
                    stage_end = max(stage_end, generated[-1].end_ms + 1)
            stages.append(StageAnnotation(session_id, stage, stage_start, max(stage_end, stage_start + 1)))
            stage_start = -(-(stage_end + STAGE_BREAK_MS) // STAGE_BREAK_MS) * STAGE_BREAK_MS
        for role in roles:
            records.extend(segments[role])
    return records, aoi_map, stages
