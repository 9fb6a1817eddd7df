import random
from unittest import TestCase

from gazetna.gtna import GazeTna
from gazetna.ingest import parse_aoi_map, parse_fixation_log, parse_stage_annotations
from gazetna.ir.aoi_map import AoiMap
from gazetna.ir.fixation_record import FixationRecord
from gazetna.ir.role import FixationKind, Role
from gazetna.ir.stage_annotation import StageAnnotation
from gazetna.ir.transition import Transition
from gazetna.sequence import (build_aoi_sequence, build_sequences, extract_transitions, merge_fixations,
                              segment_by_stage, split_by_participant)
from tests.black_mirror import DEFIB, PATIENT, TOY_LABELS, VITALS, aoi_sequence, fixture, records


def _fixation(start, end, object_id='bed', kind=FixationKind.fixation):
    return FixationRecord('s1', 'p1', Role.Airway, start, end, object_id, kind)


class MergeTest(TestCase):

    def test_gap_boundary(self):
        merged = merge_fixations([_fixation(0, 100), _fixation(400, 500)])
        self.assertEqual(len(merged), 1)
        self.assertEqual((merged[0].start_ms, merged[0].end_ms, merged[0].merged_count), (0, 500, 2))
        merged = merge_fixations([_fixation(0, 100), _fixation(401, 500)])
        self.assertEqual(len(merged), 2)

    def test_custom_gap(self):
        fixations = [_fixation(0, 100), _fixation(150, 200)]
        self.assertEqual(len(merge_fixations(fixations, gap_ms=50)), 1)
        self.assertEqual(len(merge_fixations(fixations, gap_ms=49)), 2)
        with self.assertRaises(GazeTna.ConfigError):
            merge_fixations(fixations, gap_ms=-1)

    def test_different_objects_never_merge(self):
        merged = merge_fixations([_fixation(0, 100, 'bed'), _fixation(100, 200, 'monitor'), _fixation(200, 300, 'bed')])
        self.assertEqual([m.object_id for m in merged], ['bed', 'monitor', 'bed'])

    def test_saccades_are_skipped_but_time_counts(self):
        events = [_fixation(0, 100), _fixation(100, 350, 'saccade', FixationKind.saccade), _fixation(350, 500)]
        merged = merge_fixations(events)
        self.assertEqual(len(merged), 1)
        self.assertEqual(merged[0].merged_count, 2)
        events = [_fixation(0, 100), _fixation(100, 450, 'saccade', FixationKind.saccade), _fixation(450, 500)]
        self.assertEqual(len(merge_fixations(events)), 2)

    def test_overlap_keeps_latest_end(self):
        merged = merge_fixations([_fixation(0, 900), _fixation(100, 200)])
        self.assertEqual((merged[0].start_ms, merged[0].end_ms), (0, 900))

    def test_unsorted(self):
        with self.assertRaises(GazeTna.DataError):
            merge_fixations([_fixation(500, 600), _fixation(0, 100)])

    def test_randomized_properties(self):
        generator = random.Random(7)
        for _ in range(200):
            clock, events = 0, []
            for _ in range(generator.randint(0, 40)):
                start = clock + generator.randint(0, 500)
                end = start + generator.randint(0, 300)
                events.append(_fixation(start, end, generator.choice(['bed', 'monitor', 'pads'])))
                clock = end
            merged = merge_fixations(events)
            self.assertEqual(sum(m.merged_count for m in merged), len(events))
            self.assertEqual(merge_fixations(merged), merged)
            for previous, current in zip(merged, merged[1:]):
                self.assertTrue(previous.object_id != current.object_id
                                or current.start_ms - previous.end_ms > GazeTna.DEFAULT_GAP_MS)


class SequenceTest(TestCase):

    def test_split_by_participant(self):
        items = records(['a', 'b'], participant='p2', start=1000) + records(['c'], participant='p1') \
            + records(['d'], participant='p2')
        partitions = split_by_participant(items)
        self.assertEqual(list(partitions), [('s1', 'p2', Role.CPR), ('s1', 'p1', Role.CPR)])
        self.assertEqual([r.object_id for r in partitions[('s1', 'p2', Role.CPR)]], ['d', 'a', 'b'])

    def test_build_aoi_sequence_drops_unmapped(self):
        aoi_map = AoiMap(('A', 'B'), {'a1': 'A', 'b1': 'B'})
        merged = merge_fixations(records(['a1', 'x', 'b1', 'a1']))
        sequence = build_aoi_sequence(merged, aoi_map)
        self.assertEqual(sequence.labels, ['A', 'B', 'A'])
        self.assertEqual(sequence.dropped, 1)
        self.assertEqual(sequence.participant_id, 'p1')
        self.assertEqual(sequence.role, Role.CPR)

    def test_dropping_does_not_bridge_merges(self):
        aoi_map = AoiMap(('A', 'B'), {'a1': 'A'})
        merged = merge_fixations(records(['a1', 'x', 'a1'], gap=50))
        self.assertEqual(build_aoi_sequence(merged, aoi_map).labels, ['A', 'A'])

    def test_extract_transitions(self):
        transitions = extract_transitions(aoi_sequence(TOY_LABELS))
        self.assertEqual(len(transitions), len(TOY_LABELS) - 1)
        self.assertEqual(transitions[0], Transition(PATIENT, PATIENT))
        self.assertTrue(transitions[0].is_self)
        self.assertEqual(extract_transitions(aoi_sequence([VITALS])), [])
        self.assertEqual(extract_transitions(aoi_sequence([])), [])


class StageTest(TestCase):

    def test_half_open_windows(self):
        sequence = aoi_sequence([PATIENT, VITALS, DEFIB, PATIENT])
        stages = [StageAnnotation('s1', 'stage1', 0, 1200), StageAnnotation('s1', 'stage5', 1200, 3000),
                  StageAnnotation('s2', 'stage1', 0, 9000)]
        segments = segment_by_stage(sequence, stages)
        self.assertEqual([s.stage_label for s in segments], ['stage1', 'stage5'])
        self.assertEqual(segments[0].labels, [PATIENT, VITALS])
        self.assertEqual(segments[1].labels, [DEFIB, PATIENT])

    def test_outside_all_stages(self):
        sequence = aoi_sequence([PATIENT, VITALS, DEFIB])
        segments = segment_by_stage(sequence, [StageAnnotation('s1', 'stage1', 500, 1000)])
        self.assertEqual(segments[0].labels, [VITALS])

    def test_no_stages(self):
        sequence = aoi_sequence([PATIENT, VITALS])
        self.assertEqual(segment_by_stage(sequence, []), [sequence])

    def test_transitions_stay_inside_stages(self):
        sequence = aoi_sequence([PATIENT, VITALS, DEFIB, PATIENT])
        segments = segment_by_stage(sequence, [StageAnnotation('s1', 'stage1', 0, 1200),
                                               StageAnnotation('s1', 'stage5', 1200, 3000)])
        self.assertEqual(sum(len(extract_transitions(s)) for s in segments), 2)

    def test_build_sequences(self):
        items = parse_fixation_log(fixture('two_roles.csv').data)
        aoi_map = parse_aoi_map(fixture('aoi_map.txt').data)
        sequences = build_sequences(items, aoi_map)
        self.assertEqual([(s.participant_id, s.role) for s in sequences],
                         [('a1', Role.Airway), ('d1', Role.Defib), ('d2', Role.Defib)])
        self.assertEqual(sequences[2].dropped, 1)
        staged = build_sequences(items, aoi_map, parse_stage_annotations(fixture('stages.csv').data))
        self.assertEqual([(s.participant_id, s.stage_label) for s in staged],
                         [('a1', 'stage1'), ('a1', 'stage5'), ('d1', 'stage1'), ('d1', 'stage5'),
                          ('d2', 'stage1')])
        self.assertEqual(len(staged[0]), 3)

    def test_sessions_without_stages_are_excluded(self):
        items = records([PATIENT, VITALS], session='s1') + records([PATIENT, VITALS], participant='p9', session='s9')
        with self.assertLogs('gazetna.sequence', 'WARNING'):
            sequences = build_sequences(items, AoiMap.identity(), [StageAnnotation('s1', 'stage1', 0, 9000)])
        self.assertEqual([s.session_id for s in sequences], ['s1'])
