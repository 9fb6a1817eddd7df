"""
Group summaries (median and quartiles) and the Kruskal-Wallis H test.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.stats import chi2, rankdata, tiecorrect

from gazetna.gtna import GazeTna
from gazetna.ir.group_sample import GroupSample, Summary
from gazetna.ir.kw_result import KwResult


def summarize(values: Sequence[float]) -> Tuple[float, float, float]:
    """Median, Q1 and Q3 by linear interpolation at position p * (n - 1)."""
    if len(values) == 0:
        raise GazeTna.DataError('Sorry, I can\'t summarize an empty sample')
    q1, median, q3 = np.quantile(np.asarray(values, dtype=np.float64), [0.25, 0.5, 0.75])
    return float(median), float(q1), float(q3)


def summary(values: Sequence[float]) -> Summary:
    median, q1, q3 = summarize(values)
    return Summary(median, q1, q3, len(values))


def chi2_upper_tail(h: float, df: int) -> float:
    return float(chi2.sf(h, df))


def kruskal_wallis(groups: Sequence[GroupSample]) -> KwResult:
    """
    Tie-corrected Kruskal-Wallis H with midranks over the pooled sample and a
    chi-square (df = groups - 1) upper-tail p-value.
    """
    if len(groups) < 2:
        raise GazeTna.DataError(f'Kruskal-Wallis needs at least 2 groups, got {len(groups)}')
    for group in groups:
        if not group.values:
            raise GazeTna.DataError(f'Group {group.group_label!r} is empty')
    pooled = np.concatenate([np.asarray(g.values, dtype=np.float64) for g in groups])
    n = pooled.size
    if n < 3:
        raise GazeTna.DataError(f'Kruskal-Wallis needs at least 3 observations, got {n}')
    ranks = rankdata(pooled)
    correction = float(tiecorrect(ranks))
    if correction <= 0:
        raise GazeTna.DataError('Sorry, Kruskal-Wallis is degenerate: all observations tied')
    centre = (n + 1) / 2.0
    h = 0.0
    offset = 0
    for group in groups:
        size = len(group.values)
        mean_rank = ranks[offset:offset + size].mean()
        h += size * (mean_rank - centre) ** 2
        offset += size
    h = 12.0 / (n * (n + 1)) * h / correction
    df = len(groups) - 1
    return KwResult(h_statistic=float(h), df=df, p_value=min(1.0, chi2_upper_tail(h, df)),
                    tie_correction=correction, n=n)


def significance_marker(p_value: float) -> str:
    return '**' if p_value < 0.01 else ''


def group_samples(values_by_group: Dict[str, List[float]]) -> List[GroupSample]:
    return [GroupSample(label, tuple(values)) for label, values in values_by_group.items() if values]
