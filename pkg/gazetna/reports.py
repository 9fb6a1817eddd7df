"""
Writers for run outputs: metric tables, comparison reports, network files.

Every table is written as CSV (floats at 6 significant digits) and/or JSON
(rounded the same way unless full precision is asked for).
"""

import math
import re
from json import dumps
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence

import pandas as pd

from gazetna.gtna import GazeTna
from gazetna.ir.group_sample import Summary
from gazetna.ir.kw_result import KwResult
from gazetna.stats import significance_marker

logger = getLogger(__name__)

Row = Dict[str, Any]

COMPARE_COLUMNS = ('metric', 'group', 'median', 'q1', 'q3', 'n', 'KW_h', 'df', 'p')


def number(value: float) -> str:
    return format(value, f'.{GazeTna.SIGNIFICANT_DIGITS}g')


def _missing(value: Any) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


def _cell(value: Any) -> str:
    if _missing(value):
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return number(value)
    return str(value)


def _json_value(value: Any, full_precision: bool) -> Any:
    if _missing(value):
        return None
    if isinstance(value, float) and not full_precision:
        return float(number(value))
    if isinstance(value, dict):
        return {key: _json_value(item, full_precision) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item, full_precision) for item in value]
    return value


def safe_name(text: str) -> str:
    return re.sub(r'[^A-Za-z0-9._-]+', '-', str(text)).strip('-') or 'all'


def write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as stream:
            stream.write(text)
    except OSError as e:
        raise GazeTna.ConfigError(f'Sorry, I can\'t write {path}: {e.strerror}')
    logger.debug('wrote %s', path)
    return path


def table_csv(rows: Sequence[Row], columns: Sequence[str]) -> str:
    frame = pd.DataFrame([[_cell(row.get(column)) for column in columns] for row in rows],
                         columns=list(columns), dtype=str)
    return frame.to_csv(index=False, lineterminator='\n')


def table_json(rows: Sequence[Row], columns: Sequence[str], full_precision: bool = False) -> str:
    document = [{column: _json_value(row.get(column), full_precision) for column in columns} for row in rows]
    return dumps(document, indent=2) + '\n'


def write_table(rows: Sequence[Row], columns: Sequence[str], stem: Path,
                formats: Iterable[str], full_precision: bool = False) -> List[Path]:
    """``stem`` plus ``.csv`` / ``.json`` for each requested tabular format."""
    written = []
    for output_format in formats:
        if output_format == 'csv':
            written.append(write_text(stem.with_suffix('.csv'), table_csv(rows, columns)))
        elif output_format == 'json':
            written.append(write_text(stem.with_suffix('.json'), table_json(rows, columns, full_precision)))
    return written


def columns_of(rows: Sequence[Row], leading: Sequence[str]) -> List[str]:
    """Leading columns first, then any other keys in first-seen order."""
    columns = list(leading)
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    return columns


def comparison_rows(metric: str, summaries: Mapping[str, Summary], kw: KwResult) -> List[Row]:
    rows: List[Row] = [{'metric': metric, 'group': group, 'median': s.median, 'q1': s.q1, 'q3': s.q3, 'n': s.n}
                       for group, s in summaries.items()]
    rows.append({'metric': metric, 'group': 'KW', 'n': kw.n,
                 'KW_h': kw.h_statistic, 'df': kw.df, 'p': kw.p_value})
    return rows


def comparison_table(metric: str, by: str, summaries: Mapping[str, Summary], kw: KwResult) -> str:
    """Median (Q1-Q3) per group and the Kruskal-Wallis line, ``**`` when p < .01."""
    cells = [(group, f'{number(s.median)} ({number(s.q1)}-{number(s.q3)})', str(s.n))
             for group, s in summaries.items()]
    header = ('group', 'median (Q1-Q3)', 'n')
    widths = [max(len(row[i]) for row in [header, *cells]) for i in range(2)]
    lines = [f'{metric} by {by}']
    for row in [header, *cells]:
        lines.append(f'{row[0].ljust(widths[0])}  {row[1].ljust(widths[1])}  {row[2]}'.rstrip())
    marker = significance_marker(kw.p_value)
    lines.append(f'Kruskal-Wallis H = {number(kw.h_statistic)}, df = {kw.df}, '
                 f'p = {number(kw.p_value)}{" " + marker if marker else ""}')
    return '\n'.join(lines) + '\n'
