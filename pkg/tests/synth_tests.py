from dataclasses import replace
from statistics import median
from unittest import TestCase

import numpy as np

from gazetna.gtna import GazeTna
from gazetna.ingest import format_fixation_log, parse_fixation_log
from gazetna.ir.generator_spec import GeneratorSpec
from gazetna.ir.role import FixationKind, Role
from gazetna.ir.smoothing_config import SmoothingConfig
from gazetna.sequence import build_aoi_sequence, build_sequences, extract_transitions, merge_fixations
from gazetna.stats import group_samples, kruskal_wallis
from gazetna.synth import (RandomStream, aoi_map_for, demo_corpus, derive_seed, generate, load_generator_spec,
                           load_preset, preset_names, role_preset)
from gazetna.tna_core import analyze_sequence, count_transitions, metrics_from_counts

ORDER = ('A', 'B', 'C')


def _spec(**changes):
    probs = np.array([[0.2, 0.5, 0.3], [0.3, 0.4, 0.3], [0.5, 0.25, 0.25]])
    return replace(GeneratorSpec(ORDER, probs, length=200, seed=42), **changes)


def _merged_sequence(spec):
    return build_aoi_sequence(merge_fixations(generate(spec)), aoi_map_for(spec))


def _measured_self_loop(spec):
    sequence = _merged_sequence(spec)
    counts = count_transitions(extract_transitions(sequence), sequence, spec.aoi_order)
    return metrics_from_counts(counts, SmoothingConfig(0.0)).self_loop_rate


def _participant_metrics(records, aoi_map):
    """Metrics per participant over the whole log, stages not split."""
    metrics = {}
    for sequence in build_sequences(records, aoi_map):
        metrics.setdefault(sequence.role, []).append(analyze_sequence(sequence, aoi_map.aoi_order))
    return metrics


class RandomStreamTest(TestCase):

    def test_reproducible(self):
        first, second = RandomStream(7), RandomStream(7)
        self.assertEqual([first.raw() for _ in range(5000)], [second.raw() for _ in range(5000)])
        self.assertNotEqual(RandomStream(8).raw(), RandomStream(7).raw())

    def test_ranges(self):
        stream = RandomStream(1)
        for _ in range(2000):
            self.assertTrue(0.0 <= stream.uniform() < 1.0)
            self.assertTrue(3 <= stream.integer(3, 5) <= 5)
        self.assertEqual(stream.integer(4, 4), 4)
        self.assertEqual(stream.choice([0.0, 0.0, 1.0]), 2)

    def test_derive_seed(self):
        self.assertEqual(derive_seed(0, 1, 2), derive_seed(0, 1, 2))
        self.assertNotEqual(derive_seed(0, 1, 2), derive_seed(0, 2, 1))
        self.assertTrue(0 <= derive_seed(5) < 2 ** 64)


class GenerateTest(TestCase):

    def test_deterministic(self):
        self.assertEqual(generate(_spec()), generate(_spec()))
        self.assertNotEqual(generate(_spec()), generate(_spec(seed=43)))

    def test_records(self):
        records = generate(_spec(dwell_ms=(100, 100), gap_ms=(50, 50), start_ms=1000))
        self.assertEqual(len(records), 200)
        self.assertEqual((records[0].start_ms, records[0].end_ms), (1000, 1100))
        self.assertEqual(records[1].start_ms, 1150)
        self.assertTrue(all(r.object_id in ORDER for r in records))
        self.assertTrue(all(r.role is Role.TeamLead and r.session_id == 'sim' for r in records))

    def test_saccades_fill_gaps(self):
        records = generate(_spec(emit_saccades=True, length=20))
        saccades = [r for r in records if r.kind is FixationKind.saccade]
        self.assertEqual(len(saccades), 19)
        self.assertTrue(records[-1].is_fixation)
        for before, saccade, after in zip(records[::2], records[1::2], records[2::2]):
            self.assertEqual((saccade.start_ms, saccade.end_ms), (before.end_ms, after.start_ms))

    def test_empty(self):
        self.assertEqual(generate(_spec(length=0)), [])
        self.assertEqual(parse_fixation_log(format_fixation_log([])), [])

    def test_absorbing_chain(self):
        records = generate(_spec(transition_probs=np.eye(3)))
        self.assertEqual(len({r.object_id for r in records}), 1)

    def test_objects_per_aoi(self):
        spec = _spec(objects_per_aoi=3)
        aoi_map = aoi_map_for(spec)
        self.assertEqual(len(aoi_map.entries), 9)
        self.assertTrue(all(aoi_map.label(r.object_id) in ORDER for r in generate(spec)))

    def test_output_passes_ingest(self):
        records = generate(_spec(emit_saccades=True))
        self.assertEqual(parse_fixation_log(format_fixation_log(records)), records)

    def test_invalid_specs(self):
        for changes in ({'transition_probs': np.array([[1.0, 0.0], [0.0, 1.0]])},
                        {'transition_probs': np.array([[0.5, 0.5, 0.1], [0.3, 0.4, 0.3], [0.5, 0.25, 0.25]])},
                        {'transition_probs': np.array([[1.2, -0.2, 0.0], [0.3, 0.4, 0.3], [0.5, 0.25, 0.25]])},
                        {'dwell_ms': (500, 100)},
                        {'objects_per_aoi': 0},
                        {'length': -1},
                        {'seed': -1}):
            with self.subTest(changes=list(changes)):
                with self.assertRaises(GazeTna.ConfigError):
                    _spec(**changes)

    def test_spec_does_not_alias_caller_matrix(self):
        probs = np.array([[0.2, 0.8], [0.6, 0.4]])
        spec = GeneratorSpec(('A', 'B'), probs)
        probs[0, 0] = 0.9
        self.assertEqual(spec.transition_probs[0, 0], 0.2)


class RegimeTest(TestCase):

    def test_sticky_chain_is_dominated_by_self_loops(self):
        k = len(GazeTna.DEFAULT_AOIS)
        probs = np.full((k, k), 0.001 / (k - 1))
        np.fill_diagonal(probs, 0.999)
        for seed in range(10):
            spec = GeneratorSpec(GazeTna.DEFAULT_AOIS, probs, gap_ms=(301, 700), length=10000, seed=seed)
            self.assertGreater(_measured_self_loop(spec), 0.9)

    def test_chain_without_diagonal_has_no_self_loops(self):
        k = len(GazeTna.DEFAULT_AOIS)
        probs = (np.ones((k, k)) - np.eye(k)) / (k - 1)
        for seed in range(10):
            spec = GeneratorSpec(GazeTna.DEFAULT_AOIS, probs, objects_per_aoi=3, length=10000, seed=seed)
            self.assertLess(_measured_self_loop(spec), 0.05)

    def test_short_gaps_merge_every_run(self):
        spec = _spec(gap_ms=(50, 300), objects_per_aoi=1, length=2000, seed=5)
        records = generate(spec)
        raw = [r.object_id for r in records]
        runs = 1 + sum(1 for a, b in zip(raw, raw[1:]) if a != b)
        merged = merge_fixations(records)
        self.assertEqual(len(merged), runs)
        self.assertEqual(sum(m.merged_count for m in merged), spec.length)
        labels = build_aoi_sequence(merged, aoi_map_for(spec)).labels
        self.assertFalse(any(a == b for a, b in zip(labels, labels[1:])))

    def test_cpr_scans_more_than_defib(self):
        entropy = {}
        for name in ('cpr-stage1', 'defib-stage1'):
            spec = replace(load_preset(name), length=10000)
            entropy[name] = analyze_sequence(_merged_sequence(spec), spec.aoi_order).entropy
        self.assertGreater(entropy['cpr-stage1'], entropy['defib-stage1'])


class SpecFileTest(TestCase):

    def test_load(self):
        spec = load_generator_spec('{"aoi_order": ["A", "B"], "transition_probs": [[0.5, 0.5], [1, 0]],'
                                   ' "length": 10, "seed": 3, "role": "Defib"}')
        self.assertEqual(spec.role, Role.Defib)
        self.assertEqual(len(generate(spec)), 10)

    def test_malformed(self):
        for text in ('{', '{"aoi_order": ["A", "B"]}', '{"aoi_order": ["A", "B"], "transition_probs": [[1, 0], [0, 1]],'
                                                       ' "role": "Nurse"}'):
            with self.subTest(text=text):
                with self.assertRaises(GazeTna.ConfigError):
                    load_generator_spec(text)

    def test_presets(self):
        self.assertEqual(len(preset_names()), 8)
        for name in preset_names():
            with self.subTest(preset=name):
                spec = load_preset(name)
                self.assertEqual(spec.aoi_order, GazeTna.DEFAULT_AOIS)
                self.assertEqual(spec.length, 400)
        self.assertIs(role_preset(Role.CPR, 'stage5').role, Role.CPR)
        with self.assertRaises(GazeTna.ConfigError):
            load_preset('nurse-stage1')
        with self.assertRaises(GazeTna.ConfigError):
            role_preset(Role.CPR, 'stage3')

    def test_teamlead_monitor_anchoring_grows(self):
        vitals = GazeTna.DEFAULT_AOIS.index('Patient Vitals Monitor')
        early = load_preset('teamlead-stage1').transition_probs[vitals, vitals]
        late = load_preset('teamlead-stage5').transition_probs[vitals, vitals]
        self.assertAlmostEqual(early, 0.61, places=6)
        self.assertAlmostEqual(late, 0.82, places=6)


class DemoCorpusTest(TestCase):

    def test_layout(self):
        records, aoi_map, stages = demo_corpus(seed=0, participants_per_role=2, emit_saccades=False)
        self.assertEqual(len(records), 2 * 4 * 2 * 400)
        self.assertEqual(len(stages), 4)
        self.assertEqual(aoi_map.aoi_order, GazeTna.DEFAULT_AOIS)
        first, second = stages[0], stages[1]
        self.assertEqual((first.session_id, second.session_id), ('s01', 's01'))
        self.assertLessEqual(first.end_ms + 60000, second.start_ms)
        self.assertEqual(second.start_ms % 60000, 0)
        staged = build_sequences(records, aoi_map, stages)
        self.assertEqual(len(staged), 2 * 4 * 2)
        self.assertTrue(all(len(s) > 300 for s in staged))

    def test_reproducible(self):
        self.assertEqual(demo_corpus(seed=3, participants_per_role=1),
                         demo_corpus(seed=3, participants_per_role=1))

    def test_role_orderings(self):
        held = 0
        for seed in range(10):
            records, aoi_map, _ = demo_corpus(seed=seed, emit_saccades=False)
            by_role = _participant_metrics(records, aoi_map)
            entropy = {role: median(m.entropy for m in items) for role, items in by_role.items()}
            self_loop = {role: median(m.self_loop_rate for m in items) for role, items in by_role.items()}
            if max(entropy, key=entropy.get) is Role.CPR and max(self_loop, key=self_loop.get) is Role.Defib:
                held += 1
            if seed == 0:
                for metric in ('entropy', 'self_loop_rate'):
                    groups = group_samples({role.value: [getattr(m, metric) for m in items]
                                            for role, items in by_role.items()})
                    self.assertLess(kruskal_wallis(groups).p_value, 0.01)
                for value in entropy.values():
                    self.assertTrue(0 <= value <= 2.584963)
        self.assertGreaterEqual(held, 9)
