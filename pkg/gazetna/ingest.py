"""
Readers and writers for fixation logs, AOI maps and stage annotations.
"""

import re
from collections import Counter
from decimal import Decimal, InvalidOperation
from io import StringIO
from json import JSONDecodeError, dumps, loads
from logging import getLogger
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import pandas as pd

from gazetna.gtna import GazeTna
from gazetna.ir.aoi_map import AoiMap
from gazetna.ir.fixation_record import FixationRecord
from gazetna.ir.role import FixationKind, Role
from gazetna.ir.stage_annotation import StageAnnotation

logger = getLogger(__name__)

Source = Union[bytes, str]

_PARSER_LINE = re.compile(r'line (\d+)')
_LEADING_BLANKS = re.compile(r'(?:[ \t]*\r?\n)*')


def _text(data: Source) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return bytes(data).decode('utf-8-sig')
        except UnicodeDecodeError as e:
            raise GazeTna.InputError(f'Input is not UTF-8 text: {e}')
    return str(data)


def _blank(value: Any) -> bool:
    return pd.isna(value) or not str(value).strip()


def _read_table(text: str, what: str, header: bool = True, first_line: int = 1) -> Tuple[pd.DataFrame, List[int]]:
    """
    Read a CSV table and return it with the physical source line of every
    row. Blank lines are dropped from the frame but still counted.
    """
    leading = _LEADING_BLANKS.match(text)
    first_line += leading.group(0).count('\n')
    body = text[leading.end():]
    if not body.strip():
        return pd.DataFrame(), []
    try:
        frame = pd.read_csv(StringIO(body), dtype=str, keep_default_na=False,
                            header=0 if header else None, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(), []
    except pd.errors.ParserError as e:
        found = _PARSER_LINE.search(str(e))
        line = int(found.group(1)) + first_line - 1 if found else None
        raise GazeTna.InputError(f'Malformed {what} row', line)
    line = first_line + (1 if header else 0)
    kept, lines = [], []
    for position, row in enumerate(frame.itertuples(index=False, name=None)):
        if not all(_blank(value) for value in row):
            kept.append(position)
            lines.append(line)
        # quoted fields may span lines
        line += 1 + sum(str(value).count('\n') for value in row if not pd.isna(value))
    return frame.iloc[kept].reset_index(drop=True), lines


def _require_columns(frame: pd.DataFrame, columns: Sequence[str], what: str):
    header = [str(column).strip() for column in frame.columns]
    frame.columns = header
    for column in columns:
        if column not in header:
            raise GazeTna.InputError(f'Missing column {column!r} in {what} header', 1, column)


def _value(value: Any, line: int, field: str) -> str:
    text = '' if value is None or pd.isna(value) else str(value).strip()
    if not text:
        raise GazeTna.InputError('Empty value', line, field)
    return text


def _milliseconds(value: Any, line: int, field: str) -> int:
    text = _value(value, line, field)
    try:
        # sub-millisecond input is truncated
        result = int(Decimal(text))
    except (InvalidOperation, ValueError, OverflowError):
        raise GazeTna.InputError(f'Sorry, I can\'t parse milliseconds: {text!r}', line, field)
    if result < 0:
        raise GazeTna.InputError(f'Negative milliseconds: {text}', line, field)
    return result


def _fixation(row: Sequence[Any], line: int) -> FixationRecord:
    session_id, participant_id, role, start_ms, end_ms, object_id, kind = row
    record = FixationRecord(
        session_id=_value(session_id, line, 'session_id'),
        participant_id=_value(participant_id, line, 'participant_id'),
        role=Role.parse(_value(role, line, 'role'), line),
        start_ms=_milliseconds(start_ms, line, 'start_ms'),
        end_ms=_milliseconds(end_ms, line, 'end_ms'),
        object_id=_value(object_id, line, 'object_id'),
        kind=FixationKind.parse(_value(kind, line, 'kind'), line))
    if record.end_ms < record.start_ms:
        raise GazeTna.InputError(f'end_ms {record.end_ms} precedes start_ms {record.start_ms}', line, 'end_ms')
    return record


def _fixation_rows_csv(text: str) -> Iterable[Tuple[int, Sequence[Any]]]:
    frame, lines = _read_table(text, 'fixation log')
    if frame.empty and len(frame.columns) == 0:
        if text.strip():
            raise GazeTna.InputError('Fixation log has no header', 1)
        return []
    _require_columns(frame, GazeTna.FIXATION_COLUMNS, 'fixation log')
    rows = frame[list(GazeTna.FIXATION_COLUMNS)].itertuples(index=False, name=None)
    return zip(lines, rows)


def _fixation_rows_jsonl(text: str) -> Iterable[Tuple[int, Sequence[Any]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            item = loads(raw)
        except JSONDecodeError as e:
            raise GazeTna.InputError(f'Malformed JSON ({e.msg})', number)
        if not isinstance(item, dict):
            raise GazeTna.InputError('JSON line is not an object', number)
        for column in GazeTna.FIXATION_COLUMNS:
            if column not in item:
                raise GazeTna.InputError(f'Missing key {column!r}', number, column)
        yield number, [item[column] for column in GazeTna.FIXATION_COLUMNS]


def parse_fixation_log(data: Source, format: str = 'csv') -> List[FixationRecord]:
    """
    Parse a fixation log (CSV with header row, or JSON lines with the same keys).
    Records come back in file order.
    """
    text = _text(data)
    if format == 'csv':
        rows = _fixation_rows_csv(text)
    elif format == 'jsonl':
        rows = _fixation_rows_jsonl(text)
    else:
        raise GazeTna.ConfigError(f'Sorry, I can\'t recognize fixation log format: {format}')
    records = [_fixation(row, line) for line, row in rows]
    logger.debug('parsed %d fixation log records (%s)', len(records), format)
    return records


def format_fixation_log(records: Iterable[FixationRecord], format: str = 'csv') -> str:
    columns = GazeTna.FIXATION_COLUMNS
    rows = [(r.session_id, r.participant_id, r.role.value, r.start_ms, r.end_ms, r.object_id, r.kind.value)
            for r in records]
    if format == 'csv':
        frame = pd.DataFrame(rows, columns=list(columns))
        return frame.to_csv(index=False, lineterminator='\n')
    if format == 'jsonl':
        return ''.join(dumps(dict(zip(columns, row))) + '\n' for row in rows)
    raise GazeTna.ConfigError(f'Sorry, I can\'t recognize fixation log format: {format}')


def parse_aoi_map(data: Source) -> AoiMap:
    """
    Parse an AOI map: an ``aois: A|B|...`` declaration line followed by
    ``object_id,aoi_label`` rows (an optional header row is skipped).
    """
    lines = _text(data).splitlines()
    header_line = next((number for number, line in enumerate(lines, start=1) if line.strip()), None)
    if header_line is None:
        raise GazeTna.InputError('AOI map is empty, the aois declaration is missing', 1, 'aois')
    declaration = lines[header_line - 1].strip()
    if not declaration.lower().startswith(GazeTna.AOI_HEADER_PREFIX):
        raise GazeTna.InputError('AOI map must start with an "aois:" declaration', header_line, 'aois')
    labels = [label.strip() for label in declaration[len(GazeTna.AOI_HEADER_PREFIX):].split('|')]
    if any(not label for label in labels):
        raise GazeTna.InputError('Empty AOI label in declaration', header_line, 'aois')
    if len(set(labels)) != len(labels):
        raise GazeTna.ValidationError('Duplicate AOI label in declaration', header_line, 'aois')
    if len(labels) < 2:
        raise GazeTna.ValidationError('AOI declaration needs at least 2 labels', header_line, 'aois')

    first_line = header_line + 1
    frame, row_lines = _read_table('\n'.join(lines[header_line:]), 'AOI map', header=False, first_line=first_line)
    entries: Dict[str, str] = {}
    declared = set(labels)
    if not frame.empty:
        if frame.shape[1] != 2:
            raise GazeTna.InputError(f'AOI map rows need 2 columns, found {frame.shape[1]}', row_lines[0])
        for number, (line, (object_id, label)) in enumerate(zip(row_lines, frame.itertuples(index=False, name=None))):
            object_id, label = ('' if _blank(value) else str(value).strip() for value in (object_id, label))
            if number == 0 and (object_id, label) == GazeTna.AOI_MAP_COLUMNS:
                continue
            object_id = _value(object_id, line, 'object_id')
            label = _value(label, line, 'aoi_label')
            if label not in declared:
                raise GazeTna.ValidationError(f'AOI label {label!r} is not declared', line, 'aoi_label')
            known = entries.get(object_id)
            if known is not None and known != label:
                raise GazeTna.ValidationError(
                    f'Object {object_id!r} mapped to both {known!r} and {label!r}', line, 'object_id')
            entries[object_id] = label
    logger.debug('parsed AOI map with %d labels and %d objects', len(labels), len(entries))
    return AoiMap(tuple(labels), entries)


def format_aoi_map(aoi_map: AoiMap) -> str:
    frame = pd.DataFrame(sorted(aoi_map.entries.items()), columns=list(GazeTna.AOI_MAP_COLUMNS))
    declaration = f'{GazeTna.AOI_HEADER_PREFIX} ' + '|'.join(aoi_map.aoi_order)
    return declaration + '\n' + frame.to_csv(index=False, lineterminator='\n')


def parse_stage_annotations(data: Source) -> List[StageAnnotation]:
    """Parse stage windows; annotations come back sorted by session, then start."""
    text = _text(data)
    frame, lines = _read_table(text, 'stage file')
    if frame.empty and len(frame.columns) == 0:
        return []
    _require_columns(frame, GazeTna.STAGE_COLUMNS, 'stage file')
    stages = []
    for line, row in zip(lines, frame[list(GazeTna.STAGE_COLUMNS)].itertuples(index=False, name=None)):
        session_id, stage_label, start_ms, end_ms = row
        stage = StageAnnotation(
            session_id=_value(session_id, line, 'session_id'),
            stage_label=_value(stage_label, line, 'stage_label'),
            start_ms=_milliseconds(start_ms, line, 'start_ms'),
            end_ms=_milliseconds(end_ms, line, 'end_ms'))
        if stage.end_ms <= stage.start_ms:
            raise GazeTna.ValidationError(
                f'Stage {stage.stage_label!r} ends ({stage.end_ms}) before it starts ({stage.start_ms})', line, 'end_ms')
        stages.append(stage)
    stages.sort(key=lambda s: (s.session_id, s.start_ms))
    for previous, current in zip(stages, stages[1:]):
        if previous.session_id == current.session_id and current.start_ms < previous.end_ms:
            raise GazeTna.ValidationError(
                f'Stages {previous.stage_label!r} and {current.stage_label!r} overlap in session {current.session_id!r}')
    return stages


def format_stage_annotations(stages: Iterable[StageAnnotation]) -> str:
    frame = pd.DataFrame([(s.session_id, s.stage_label, s.start_ms, s.end_ms) for s in stages],
                         columns=list(GazeTna.STAGE_COLUMNS))
    return frame.to_csv(index=False, lineterminator='\n')


def unmapped_objects(records: Iterable[FixationRecord], aoi_map: AoiMap) -> Counter:
    """Inventory of gazed objects the map does not know, by fixation count."""
    return Counter(r.object_id for r in records if r.is_fixation and aoi_map.label(r.object_id) is None)
