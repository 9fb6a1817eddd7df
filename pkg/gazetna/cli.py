"""
Command line: ``gazetna <command> [options]``.

Commands: validate, analyze, compare, network, motifs, shift, simulate.
Exit codes: 0 ok, 2 input error, 3 config error, 4 internal error.
"""

import argparse
import sys
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from functools import cached_property
from logging import DEBUG, ERROR, WARNING, basicConfig, getLogger
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from gazetna import __version__
from gazetna.config import KNOWN_KEYS, check_inputs, resolve_config
from gazetna.gtna import GazeTna
from gazetna.ingest import (format_aoi_map, format_fixation_log, format_stage_annotations, parse_aoi_map,
                            parse_fixation_log, parse_stage_annotations, unmapped_objects)
from gazetna.ir.aoi_map import AoiMap
from gazetna.ir.aoi_sequence import AoiSequence
from gazetna.ir.role import Role
from gazetna.ir.run_config import RunConfig
from gazetna.ir.smoothing_config import SmoothingConfig
from gazetna.ir.tna_metrics import TnaMetrics
from gazetna.ir.tna_network import TnaNetwork
from gazetna.ir.transition_counts import TransitionCounts
from gazetna.loggable import Loggable
from gazetna.network import build_network, export_dot, export_json, find_motifs, self_loop_shift
from gazetna.reports import (COMPARE_COLUMNS, columns_of, comparison_rows, comparison_table, number, safe_name,
                             write_table, write_text)
from gazetna.sequence import build_aoi_sequence, build_sequences, extract_transitions, merge_fixations, \
    split_by_participant
from gazetna.stats import group_samples, kruskal_wallis, summary
from gazetna.synth import aoi_map_for, demo_corpus, generate, load_generator_spec, load_preset, preset_names
from gazetna.tna_core import count_transitions, metrics_from_counts, pool_counts, smooth_and_normalize

logger = getLogger('gazetna')

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'
ANY = '*'
METRICS = ('entropy', 'self_loop', 'cross_scan', 'n_fixations', 'n_transitions')
METRIC_COLUMNS = ('participant', 'role', 'stage', 'n_sequences', 'n_fixations', 'n_transitions',
                  'entropy', 'self_loop', 'cross_scan', 'effective_rows', 'skipped')
MOTIF_COLUMNS = ('kind', 'members', 'min_edge_prob')
SHIFT_COLUMNS = ('role', 'aoi', 'from_stage', 'to_stage', 'before', 'after', 'delta')

Cell = Tuple[str, str, str]
Row = Dict[str, Any]


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise GazeTna.ConfigError(f'{self.prog}: {message}')


class TnaRun(Loggable):
    """One configured run over a fixation log, its AOI map and stage annotations."""

    def __init__(self, config: RunConfig):
        super().__init__()
        self.config = config

    @staticmethod
    def _read(path: Path) -> bytes:
        try:
            return Path(path).read_bytes()
        except OSError as e:
            raise GazeTna.ConfigError(f'Sorry, I can\'t read {path}: {e.strerror}')

    @cached_property
    def records(self):
        return parse_fixation_log(self._read(self.config.fixations), self.config.input_format)

    @cached_property
    def aoi_map(self) -> AoiMap:
        if self.config.aoi_map is None:
            self.debug('no AOI map given, object ids are taken as AOI labels')
            return AoiMap.identity()
        return parse_aoi_map(self._read(self.config.aoi_map))

    @cached_property
    def stages(self):
        if self.config.stages is None:
            return []
        return parse_stage_annotations(self._read(self.config.stages))

    @cached_property
    def stage_order(self) -> List[str]:
        order = []
        for stage in sorted(self.stages, key=lambda s: (s.start_ms, s.session_id)):
            if stage.stage_label not in order:
                order.append(stage.stage_label)
        return order

    @cached_property
    def sequences(self) -> List[AoiSequence]:
        return build_sequences(self.records, self.aoi_map, self.stages, self.config.gap_ms)

    @property
    def smoothing(self) -> SmoothingConfig:
        return SmoothingConfig(self.config.alpha, self.config.smooth_empty_rows)

    def _sort_key(self, cell: Cell):
        participant, role, stage = cell
        roles = [r.value for r in Role]
        role_rank = -1 if role == ANY else roles.index(role)
        if stage == ANY:
            stage_rank = -1
        else:
            stage_rank = self.stage_order.index(stage) if stage in self.stage_order else len(self.stage_order)
        return participant, role_rank, stage_rank, stage

    def cells(self, group_by: Sequence[str]) -> 'OrderedDict[Cell, List[AoiSequence]]':
        """Sequences keyed by (participant, role, stage); ungrouped keys read ``*``."""
        grouped: Dict[Cell, List[AoiSequence]] = {}
        for sequence in self.sequences:
            cell = (sequence.participant_id if 'participant' in group_by else ANY,
                    sequence.role.value if 'role' in group_by else ANY,
                    (sequence.stage_label or ANY) if 'stage' in group_by else ANY)
            grouped.setdefault(cell, []).append(sequence)
        return OrderedDict((cell, grouped[cell]) for cell in sorted(grouped, key=self._sort_key))

    def counts(self, sequences: Sequence[AoiSequence]) -> TransitionCounts:
        order = self.aoi_map.aoi_order
        return pool_counts((count_transitions(extract_transitions(s), s, order) for s in sequences), order)

    def metrics(self, counts: TransitionCounts) -> TnaMetrics:
        return metrics_from_counts(counts, self.smoothing, renormalize=self.config.entropy_renormalize,
                                   include_self=self.config.entropy_include_self)

    def _analyze_cell(self, item: Tuple[Cell, List[AoiSequence]]) -> Row:
        (participant, role, stage), sequences = item
        counts = self.counts(sequences)
        row: Row = {'participant': participant, 'role': role, 'stage': stage,
                    'n_sequences': sum(1 for s in sequences if len(s)),
                    'n_fixations': counts.n_fixations, 'n_transitions': counts.n_transitions}
        if counts.n_fixations == 0:
            self.warning('cell participant=%s role=%s stage=%s has no fixations, skipped', participant, role, stage)
            row['skipped'] = True
            return row
        metrics = self.metrics(counts)
        row.update(entropy=metrics.entropy, self_loop=metrics.self_loop_rate, cross_scan=metrics.cross_scan_rate,
                   effective_rows=metrics.effective_rows, skipped=False)
        for label, h in zip(metrics.aoi_order, metrics.per_aoi_entropy):
            row[f'entropy:{label}'] = h
        for label, d in zip(metrics.aoi_order, metrics.per_aoi_self_loop):
            row[f'self_loop:{label}'] = d
        return row

    def analyze(self, group_by: Optional[Sequence[str]] = None) -> List[Row]:
        """
        One row per cell in (participant, role, stage) order. Cells are
        independent; with ``workers`` > 1 they run on a thread pool and are
        collected in submission order.
        """
        cells = list(self.cells(self.config.group_by if group_by is None else group_by).items())
        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                rows = list(pool.map(self._analyze_cell, cells))
        else:
            rows = [self._analyze_cell(cell) for cell in cells]
        self.info('analyzed %d cells (%d skipped)', len(rows), sum(1 for r in rows if r['skipped']))
        return rows

    def metric_columns(self) -> List[str]:
        order = self.aoi_map.aoi_order
        return list(METRIC_COLUMNS) + [f'entropy:{label}' for label in order] \
            + [f'self_loop:{label}' for label in order]

    def compare(self, metric: str, by: str = 'role'):
        if metric not in METRICS:
            raise GazeTna.ConfigError(f'Sorry, I can\'t compare metric: {metric} (known: {", ".join(METRICS)})')
        if by not in ('role', 'stage'):
            raise GazeTna.ConfigError(f'Sorry, I can\'t compare by: {by}')
        group_by = ('participant', 'role') if by == 'role' else ('participant', 'role', 'stage')
        values: Dict[str, List[float]] = {}
        for row in self.analyze(group_by):
            value = row.get(metric)
            if row['skipped'] or value is None:
                continue
            values.setdefault(row[by], []).append(float(value))
        if by == 'role':
            ordered = [role.value for role in Role if role.value in values]
        else:
            ordered = sorted(values, key=lambda stage: self._sort_key((ANY, ANY, stage)))
        groups = group_samples(OrderedDict((group, values[group]) for group in ordered))
        if len(groups) < 2:
            raise GazeTna.ValidationError(f'Comparing {metric} by {by} needs at least 2 groups, found {len(groups)}')
        summaries = OrderedDict((group.group_label, summary(group.values)) for group in groups)
        try:
            kw = kruskal_wallis(groups)
        except GazeTna.DataError as e:
            raise GazeTna.ValidationError(f'Sorry, I can\'t compare {metric} by {by}: {e}')
        return summaries, kw

    def networks(self, group_by: Optional[Sequence[str]] = None) -> List[Tuple[Cell, TnaNetwork]]:
        """Pooled-count networks per cell; cells without fixations are left out."""
        group_by = self.config.group_by if group_by is None else group_by
        networks = []
        for cell, sequences in self.cells(group_by).items():
            counts = self.counts(sequences)
            if counts.n_fixations == 0:
                self.warning('cell participant=%s role=%s stage=%s has no fixations, no network written', *cell)
                continue
            metrics = self.metrics(counts)
            scope = {key: value for key, value in zip(('participant', 'role', 'stage'), cell) if value != ANY}
            networks.append((cell, build_network(smooth_and_normalize(counts, self.smoothing), counts,
                                                 self.config.min_prob, scope, metrics.entropy,
                                                 metrics.self_loop_rate)))
        return networks

    def shift(self) -> List[Row]:
        if not self.stages:
            raise GazeTna.ConfigError('Self-loop shifts need stage annotations (--stages)')
        by_role: Dict[str, Dict[str, TnaNetwork]] = OrderedDict()
        for (_, role, stage), net in self.networks(('role', 'stage')):
            by_role.setdefault(role, OrderedDict())[stage] = net
        rows = []
        for role, networks in by_role.items():
            rows.extend({'role': role, **row} for row in self_loop_shift(networks, self.aoi_map.aoi_order))
        return rows

    def validate(self) -> Row:
        """Counts per input file plus the volume identity transitions = merged - sequences."""
        records = self.records
        fixations = sum(1 for r in records if r.is_fixation)
        dropped = 0
        for (session_id, participant_id, role), items in split_by_participant(records).items():
            sequence = build_aoi_sequence(merge_fixations(items, self.config.gap_ms), self.aoi_map,
                                          participant_id=participant_id, role=role, session_id=session_id)
            dropped += sequence.dropped
        sequences = [s for s in self.sequences if len(s)]
        merged = sum(len(s) for s in sequences)
        transitions = sum(len(extract_transitions(s)) for s in sequences)
        if transitions != merged - len(sequences):
            raise GazeTna.InternalError(f'{transitions} transitions from {merged} fixations in {len(sequences)} sequences')
        unmapped = unmapped_objects(records, self.aoi_map)
        if unmapped:
            self.warning('%d object ids have no AOI label', len(unmapped))
        return {
            'records': len(records),
            'fixations': fixations,
            'saccades': len(records) - fixations,
            'participants': len({(r.participant_id, r.role) for r in records}),
            'sessions': len({r.session_id for r in records}),
            'aois': self.aoi_map.size,
            'objects': len(self.aoi_map.entries),
            'stage_windows': len(self.stages),
            'merged_fixations': merged,
            'dropped_unmapped': dropped,
            'sequences': len(sequences),
            'transitions': transitions,
            'unmapped_objects': OrderedDict(sorted(unmapped.items(), key=lambda item: (-item[1], item[0]))),
        }


def network_name(cell: Cell, by_participant: bool) -> str:
    participant, role, stage = cell
    parts = [role if role != ANY else 'all', stage if stage != ANY else 'all']
    if by_participant:
        parts.insert(0, participant)
    return 'tna_' + '_'.join(safe_name(part) for part in parts)


def validation_text(config: RunConfig, report: Row) -> str:
    lines = [f'{config.fixations.name}: {report["records"]} records ({report["fixations"]} fixations, '
             f'{report["saccades"]} saccades), {report["participants"]} participants in {report["sessions"]} sessions',
             f'{config.aoi_map.name if config.aoi_map else "identity AOI map"}: '
             f'{report["aois"]} AOIs, {report["objects"]} objects']
    if config.stages is not None:
        lines.append(f'{config.stages.name}: {report["stage_windows"]} stage windows')
    lines.append(f'merged fixations: {report["merged_fixations"]} (dropped unmapped: {report["dropped_unmapped"]})')
    lines.append(f'sequences: {report["sequences"]}, transitions: {report["transitions"]}')
    for object_id, count in report['unmapped_objects'].items():
        lines.append(f'unmapped object: {object_id} ({count} fixations)')
    return '\n'.join(lines) + '\n'


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    flags = {key: value for key, value in vars(args).items() if key in KNOWN_KEYS}
    if flags.get('formats'):
        flags['formats'] = ','.join(flags['formats'])
    return flags


def _run(args: argparse.Namespace, defaults: Optional[Dict[str, Any]] = None) -> TnaRun:
    config = resolve_config(_flags(args), args.config, defaults)
    check_inputs(config)
    logger.debug('run config %r', config)
    return TnaRun(config)


def cmd_validate(args: argparse.Namespace) -> int:
    run = _run(args)
    sys.stdout.write(validation_text(run.config, run.validate()))
    return GazeTna.EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    run = _run(args)
    rows = run.analyze()
    config = run.config
    write_table(rows, columns_of(rows, run.metric_columns()), config.output_dir / 'metrics',
                config.formats, config.full_precision)
    return GazeTna.EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    run = _run(args)
    config = run.config
    for metric in args.metric or ('entropy', 'self_loop'):
        summaries, kw = run.compare(metric, args.by)
        stem = config.output_dir / f'compare_{metric}'
        write_table(comparison_rows(metric, summaries, kw), COMPARE_COLUMNS, stem, config.formats,
                    config.full_precision)
        text = comparison_table(metric, args.by, summaries, kw)
        write_text(stem.with_suffix('.txt'), text)
        sys.stdout.write(text)
    return GazeTna.EXIT_OK


def cmd_network(args: argparse.Namespace) -> int:
    run = _run(args, {'group_by': ('role',), 'formats': ('dot', 'json')})
    config = run.config
    for cell, net in run.networks():
        stem = config.output_dir / network_name(cell, config.by_participant)
        if 'dot' in config.formats:
            write_text(stem.with_suffix('.dot'), export_dot(net))
        if 'json' in config.formats:
            write_text(stem.with_suffix('.json'), export_json(net, config.full_precision))
    return GazeTna.EXIT_OK


def cmd_motifs(args: argparse.Namespace) -> int:
    run = _run(args, {'group_by': ('role',)})
    config = run.config
    for cell, net in run.networks():
        rows = [{'kind': motif.kind.value, 'members': '|'.join(motif.members), 'min_edge_prob': motif.min_edge_prob}
                for motif in find_motifs(net, config.motif_threshold)]
        name = network_name(cell, config.by_participant).replace('tna_', 'motifs_', 1)
        write_table(rows, MOTIF_COLUMNS, config.output_dir / name, config.formats, config.full_precision)
        run.info('%s: %d motifs at threshold %s', name, len(rows), number(config.motif_threshold))
    return GazeTna.EXIT_OK


def cmd_shift(args: argparse.Namespace) -> int:
    run = _run(args)
    config = run.config
    rows = run.shift()
    write_table(rows, SHIFT_COLUMNS, config.output_dir / 'shift', config.formats, config.full_precision)
    for row in rows:
        sys.stdout.write(f'{row["role"]} {row["aoi"]}: {row["from_stage"]} {number(row["before"])} -> '
                         f'{row["to_stage"]} {number(row["after"])} ({row["delta"]:+.3f})\n')
    return GazeTna.EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = resolve_config(_flags(args), args.config)
    seed = config.seed
    if args.demo is not None:
        records, aoi_map, stages = demo_corpus(seed=0 if seed is None else seed,
                                               participants_per_role=args.participants,
                                               emit_saccades=not args.no_saccades)
        write_text(args.demo / 'fixations.csv', format_fixation_log(records))
        write_text(args.demo / 'aoi_map.txt', format_aoi_map(aoi_map))
        write_text(args.demo / 'stages.csv', format_stage_annotations(stages))
        logger.info('demo corpus of %d records written to %s', len(records), args.demo)
        return GazeTna.EXIT_OK
    if (args.preset is None) == (args.spec is None):
        raise GazeTna.ConfigError('simulate needs exactly one of --preset, --spec or --demo')
    spec = load_preset(args.preset) if args.preset else load_generator_spec(args.spec)
    overrides: Dict[str, Any] = {}
    if seed is not None:
        overrides['seed'] = seed
    if args.length is not None:
        overrides['length'] = args.length
    if args.emit_saccades:
        overrides['emit_saccades'] = True
    if overrides:
        spec = replace(spec, **overrides)
    text = format_fixation_log(generate(spec), args.log_format)
    if args.output is None:
        sys.stdout.write(text)
    else:
        write_text(args.output, text)
    if args.aoi_map_out is not None:
        write_text(args.aoi_map_out, format_aoi_map(aoi_map_for(spec)))
    return GazeTna.EXIT_OK


def _common_options() -> ArgumentParser:
    parent = ArgumentParser(add_help=False)
    parent.add_argument('--config', type=Path, help='YAML file of run settings (flags override it)')
    parent.add_argument('--output-dir', dest='output_dir', type=Path, help='directory for output files')
    parent.add_argument('--format', dest='formats', action='append',
                        help='output format(s): csv, json, dot (repeatable or comma separated)')
    parent.add_argument('--seed', type=int, help='generator seed (only simulate draws random numbers)')
    parent.add_argument('--full-precision', dest='full_precision', action='store_const', const=True,
                        help='keep full float precision in JSON outputs')
    verbosity = parent.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='errors only')
    return parent


def _input_options() -> ArgumentParser:
    parent = ArgumentParser(add_help=False)
    parent.add_argument('--fixations', type=Path, help='fixation log (CSV or JSON lines)')
    parent.add_argument('--aoi-map', dest='aoi_map', type=Path, help='object id to AOI label map')
    parent.add_argument('--stages', type=Path, help='stage annotations CSV')
    parent.add_argument('--input-format', dest='input_format', choices=('csv', 'jsonl'))
    parent.add_argument('--alpha', type=float, help='Laplace smoothing constant (default 0.5)')
    parent.add_argument('--gap-ms', dest='gap_ms', type=int, help='merge gap in ms (default 300)')
    parent.add_argument('--no-entropy-renormalize', dest='entropy_renormalize', action='store_const', const=False,
                        help='use raw off-diagonal probabilities in the entropy')
    parent.add_argument('--entropy-include-self', dest='entropy_include_self', action='store_const', const=True,
                        help='include self-transitions in the entropy')
    parent.add_argument('--smooth-empty-rows', dest='smooth_empty_rows', action='store_const', const=True,
                        help='smooth rows of AOIs never left')
    parent.add_argument('--group-by', dest='group_by',
                        help='comma separated subset of participant, role, stage')
    parent.add_argument('--min-prob', dest='min_prob', type=float, help='drop network edges below this')
    parent.add_argument('--threshold', dest='motif_threshold', type=float,
                        help='motif edge threshold (default 0.15)')
    parent.add_argument('--workers', type=int, help='analysis threads')
    return parent


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='gazetna', description='Transition network analysis of gaze fixation logs.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', metavar='command', required=True)
    common, inputs = _common_options(), _input_options()

    def command(name: str, handler, text: str, with_inputs: bool = True) -> ArgumentParser:
        sub = commands.add_parser(name, help=text, description=text,
                                  parents=[common, inputs] if with_inputs else [common])
        sub.set_defaults(handler=handler)
        return sub

    command('validate', cmd_validate, 'parse all inputs and report counts')
    command('analyze', cmd_analyze, 'entropy and self-loop metrics per cell')
    compare = command('compare', cmd_compare, 'median (Q1-Q3) per group and Kruskal-Wallis test')
    compare.add_argument('--metric', action='append', choices=METRICS,
                         help='metric to compare (repeatable, default entropy and self_loop)')
    compare.add_argument('--by', choices=('role', 'stage'), default='role')
    command('network', cmd_network, 'DOT / JSON transition networks per cell')
    command('motifs', cmd_motifs, 'reciprocal dyads and cyclic triads per cell')
    command('shift', cmd_shift, 'per-AOI self-loop probability across stages, per role')
    simulate = command('simulate', cmd_simulate, 'synthetic fixation logs', with_inputs=False)
    source = simulate.add_mutually_exclusive_group()
    source.add_argument('--preset', help=f'preset name ({", ".join(preset_names())})')
    source.add_argument('--spec', type=Path, help='generator spec JSON file')
    source.add_argument('--demo', type=Path, help='write the 4-role demo corpus into this directory')
    simulate.add_argument('--output', '-o', type=Path, help='fixation log path (default stdout)')
    simulate.add_argument('--aoi-map-out', dest='aoi_map_out', type=Path, help='also write the AOI map here')
    simulate.add_argument('--length', type=int, help='number of fixations')
    simulate.add_argument('--emit-saccades', dest='emit_saccades', action='store_true')
    simulate.add_argument('--no-saccades', dest='no_saccades', action='store_true',
                          help='demo corpus without saccade rows')
    simulate.add_argument('--participants', type=int, default=10, help='demo participants per role')
    simulate.add_argument('--log-format', dest='log_format', choices=('csv', 'jsonl'), default='csv')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    basicConfig(level=WARNING, format=LOG_FORMAT, stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
        getLogger().setLevel(DEBUG if args.verbose else ERROR if args.quiet else WARNING)
        return args.handler(args)
    except GazeTna.Error as e:
        logger.error('%s', e)
        return e.exit_code
    except Exception as e:
        logger.exception('Internal error: %s', e)
        return GazeTna.EXIT_INTERNAL_ERROR
