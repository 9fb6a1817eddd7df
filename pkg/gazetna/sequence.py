"""
From raw fixation events to AOI sequences and transitions.
"""

from bisect import bisect_right
from collections import OrderedDict
from logging import getLogger
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from gazetna.gtna import GazeTna
from gazetna.ir.aoi_map import AoiMap
from gazetna.ir.aoi_sequence import AoiSequence
from gazetna.ir.fixation_record import FixationRecord
from gazetna.ir.merged_fixation import MergedFixation
from gazetna.ir.role import Role
from gazetna.ir.stage_annotation import StageAnnotation
from gazetna.ir.transition import Transition

logger = getLogger(__name__)

ParticipantKey = Tuple[str, str, Role]


def split_by_participant(records: Iterable[FixationRecord]) -> 'OrderedDict[ParticipantKey, List[FixationRecord]]':
    """
    Partition records by (session, participant, role), each partition sorted by
    start_ms (stable, so file order breaks ties). Partitions keep first-seen order.
    """
    partitions: 'OrderedDict[ParticipantKey, List[FixationRecord]]' = OrderedDict()
    for record in records:
        partitions.setdefault((record.session_id, record.participant_id, record.role), []).append(record)
    for key, items in partitions.items():
        items.sort(key=lambda r: r.start_ms)
    return partitions


def merge_fixations(records: Sequence[Union[FixationRecord, MergedFixation]],
                    gap_ms: int = GazeTna.DEFAULT_GAP_MS) -> List[MergedFixation]:
    """
    Fuse consecutive fixations on the same object whose gap
    (next.start_ms - previous.end_ms) is at most ``gap_ms``.

    Saccades are skipped; only time decides the gap. Accepts already merged
    fixations too, which makes the operation idempotent.
    """
    if gap_ms < 0:
        raise GazeTna.ConfigError(f'gap_ms must be non-negative, got {gap_ms}')
    merged: List[MergedFixation] = []
    last_start = None
    for record in records:
        if last_start is not None and record.start_ms < last_start:
            raise GazeTna.DataError(
                f'Records are not sorted by start_ms ({record.start_ms} after {last_start}); sort them first')
        last_start = record.start_ms
        if isinstance(record, FixationRecord) and not record.is_fixation:
            continue
        previous = merged[-1] if merged else None
        if previous is not None and previous.object_id == record.object_id \
                and record.start_ms - previous.end_ms <= gap_ms:
            merged[-1] = MergedFixation(
                participant_id=previous.participant_id,
                role=previous.role,
                object_id=previous.object_id,
                start_ms=previous.start_ms,
                end_ms=max(previous.end_ms, record.end_ms),
                merged_count=previous.merged_count + record.merged_count,
                aoi=previous.aoi,
                session_id=previous.session_id)
            continue
        merged.append(MergedFixation(
            participant_id=record.participant_id,
            role=record.role,
            object_id=record.object_id,
            start_ms=record.start_ms,
            end_ms=record.end_ms,
            merged_count=record.merged_count,
            aoi=getattr(record, 'aoi', None),
            session_id=record.session_id))
    return merged


def build_aoi_sequence(merged: Sequence[MergedFixation], aoi_map: AoiMap,
                       participant_id: str = '', role: Role = None, session_id: str = '') -> AoiSequence:
    """Map objects to AOI labels; fixations on unmapped objects are dropped."""
    fixations = []
    dropped = 0
    for fixation in merged:
        label = aoi_map.label(fixation.object_id)
        if label is None:
            dropped += 1
            continue
        fixations.append(fixation.mapped(label))
    if merged:
        participant_id = participant_id or merged[0].participant_id
        role = role or merged[0].role
        session_id = session_id or merged[0].session_id
    if dropped:
        logger.debug('participant %s: dropped %d unmapped fixations', participant_id, dropped)
    return AoiSequence(participant_id=participant_id, role=role, fixations=tuple(fixations),
                       session_id=session_id, dropped=dropped)


def segment_by_stage(sequence: AoiSequence, stages: Sequence[StageAnnotation]) -> List[AoiSequence]:
    """
    One sequence per stage of the sequence's session. A fixation belongs to the
    stage whose half-open window [start, end) holds its start_ms; fixations
    outside all stages are dropped. Without stages the input comes back as is.
    """
    if not stages:
        return [sequence]
    windows = sorted((s for s in stages if not sequence.session_id or s.session_id == sequence.session_id),
                     key=lambda s: s.start_ms)
    starts = [s.start_ms for s in windows]
    buckets: Dict[int, List[MergedFixation]] = {index: [] for index in range(len(windows))}
    for fixation in sequence.fixations:
        index = bisect_right(starts, fixation.start_ms) - 1
        if index >= 0 and windows[index].contains(fixation.start_ms):
            buckets[index].append(fixation)
    return [AoiSequence(participant_id=sequence.participant_id, role=sequence.role,
                        fixations=tuple(buckets[index]), stage_label=stage.stage_label,
                        session_id=sequence.session_id)
            for index, stage in enumerate(windows)]


def extract_transitions(sequence: AoiSequence) -> List[Transition]:
    labels = sequence.labels
    return [Transition(a, b) for a, b in zip(labels, labels[1:])]


def build_sequences(records: Iterable[FixationRecord], aoi_map: AoiMap,
                    stages: Sequence[StageAnnotation] = (),
                    gap_ms: int = GazeTna.DEFAULT_GAP_MS) -> List[AoiSequence]:
    """Participant-role sequences (split by stage when stages are given)."""
    sequences = []
    for (session_id, participant_id, role), items in split_by_participant(records).items():
        sequence = build_aoi_sequence(merge_fixations(items, gap_ms), aoi_map,
                                      participant_id=participant_id, role=role, session_id=session_id)
        session_stages = [s for s in stages if s.session_id == session_id]
        if stages and not session_stages:
            logger.warning('session %s has no stage annotations, its fixations are excluded', session_id)
            continue
        sequences.extend(segment_by_stage(sequence, session_stages))
    return sequences
