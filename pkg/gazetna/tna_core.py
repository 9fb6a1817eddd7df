"""
Transition counts, Laplace-smoothed row-stochastic matrices and the
entropy / self-loop metrics derived from them.
"""

from dataclasses import replace
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from gazetna.gtna import GazeTna
from gazetna.ir.aoi_sequence import AoiSequence
from gazetna.ir.smoothing_config import SmoothingConfig
from gazetna.ir.tna_metrics import TnaMetrics
from gazetna.ir.transition import Transition
from gazetna.ir.transition_counts import TransitionCounts
from gazetna.ir.transition_matrix import TransitionMatrix
from gazetna.sequence import extract_transitions


def _indexer(order: Sequence[str]) -> Dict[str, int]:
    return {label: index for index, label in enumerate(order)}


def _position(index: Dict[str, int], label: str) -> int:
    try:
        return index[label]
    except KeyError:
        raise GazeTna.DataError(f'Sorry, AOI {label!r} is not in the AOI order {list(index)}')


def count_transitions(transitions: Iterable[Transition], fixations: AoiSequence,
                      order: Sequence[str]) -> TransitionCounts:
    order = tuple(order)
    index = _indexer(order)
    k = len(order)
    counts = np.zeros((k, k), dtype=np.int64)
    for transition in transitions:
        counts[_position(index, transition.from_aoi), _position(index, transition.to_aoi)] += 1
    totals = np.zeros(k, dtype=np.int64)
    for label in fixations.labels:
        totals[_position(index, label)] += 1
    return TransitionCounts(order, counts, totals, sequences=1 if len(fixations) else 0)


def pool_counts(parts: Iterable[TransitionCounts], order: Sequence[str] = None) -> TransitionCounts:
    """Sum count matrices (pooling before smoothing)."""
    parts = list(parts)
    if not parts:
        if order is None:
            raise GazeTna.DataError('Nothing to pool and no AOI order given')
        k = len(order)
        return TransitionCounts(tuple(order), np.zeros((k, k), dtype=np.int64), np.zeros(k, dtype=np.int64), 0)
    order = tuple(order or parts[0].aoi_order)
    for part in parts:
        if part.aoi_order != order:
            raise GazeTna.DataError(f'Cannot pool counts over different AOI orders: {list(part.aoi_order)}')
    return TransitionCounts(order,
                            sum((p.counts for p in parts[1:]), parts[0].counts.copy()),
                            sum((p.fixation_totals for p in parts[1:]), parts[0].fixation_totals.copy()),
                            sum(p.sequences for p in parts))


def smooth_and_normalize(c: TransitionCounts, cfg: SmoothingConfig = SmoothingConfig()) -> TransitionMatrix:
    """
    P_ij = (C_ij + alpha) / sum_k (C_ik + alpha) on non-empty rows. Empty rows stay
    all-zero unless ``cfg.smooth_empty_rows`` (then they are uniform when alpha > 0).
    """
    support = c.row_support.astype(np.int64)
    smoothed = c.counts.astype(np.float64) + cfg.alpha
    totals = smoothed.sum(axis=1)
    keep = support > 0
    if cfg.smooth_empty_rows:
        keep = keep | (totals > 0)
    probs = np.zeros_like(smoothed)
    probs[keep] = smoothed[keep] / totals[keep, np.newaxis]
    return TransitionMatrix(c.aoi_order, probs, support, alpha=cfg.alpha)


def _shannon_bits(row: np.ndarray) -> float:
    positive = row[row > 0]
    return float(-(positive * np.log2(positive)).sum())


def entropy(p: TransitionMatrix, renormalize: bool = True,
            include_self: bool = False) -> Tuple[np.ndarray, Optional[float]]:
    """
    Row entropies in bits and their mean over rows that carry a distribution.

    By default the diagonal is excluded and the off-diagonal entries are
    renormalized to sum to one. Rows without a distribution give NaN; the
    mean is None when no row qualifies.
    """
    k = len(p.aoi_order)
    per_aoi = np.full(k, np.nan)
    active = p.active_rows
    for i in np.flatnonzero(active):
        row = p.probs[i].copy()
        if not include_self:
            row = np.delete(row, i)
            if renormalize:
                total = row.sum()
                if total <= 0:
                    per_aoi[i] = 0.0
                    continue
                row = row / total
        per_aoi[i] = _shannon_bits(row)
    if not active.any():
        return per_aoi, None
    return per_aoi, float(per_aoi[active].mean())


def self_loop_rate(p: TransitionMatrix, c: TransitionCounts) -> Tuple[float, float, np.ndarray]:
    """Fixation-weighted diagonal: sum_i w_i * P_ii, with its complement."""
    fixations = c.fixation_totals.sum()
    if fixations <= 0:
        raise GazeTna.DataError('Sorry, I can\'t compute a self-loop rate of an empty sequence')
    weights = c.fixation_totals / fixations
    self_loop = float(np.dot(weights, np.diag(p.probs)))
    return self_loop, 1.0 - self_loop, weights


def metrics_from_counts(c: TransitionCounts, cfg: SmoothingConfig = SmoothingConfig(),
                        renormalize: bool = True, include_self: bool = False) -> TnaMetrics:
    p = smooth_and_normalize(c, cfg)
    per_aoi, mean = entropy(p, renormalize=renormalize, include_self=include_self)
    self_loop, cross_scan, weights = self_loop_rate(p, c)
    return TnaMetrics(
        aoi_order=c.aoi_order,
        entropy=mean,
        per_aoi_entropy=tuple(None if np.isnan(h) else float(h) for h in per_aoi),
        self_loop_rate=self_loop,
        cross_scan_rate=cross_scan,
        weights=tuple(float(w) for w in weights),
        n_fixations=c.n_fixations,
        n_transitions=c.n_transitions,
        effective_rows=int(p.active_rows.sum()),
        per_aoi_self_loop=tuple(float(d) for d in p.diagonal))


def analyze_sequence(seq: AoiSequence, order: Sequence[str] = GazeTna.DEFAULT_AOIS,
                     cfg: SmoothingConfig = SmoothingConfig(),
                     renormalize: bool = True, include_self: bool = False) -> TnaMetrics:
    if not len(seq):
        raise GazeTna.DataError(f'Sorry, sequence of participant {seq.participant_id!r} is empty')
    counts = count_transitions(extract_transitions(seq), seq, order)
    metrics = metrics_from_counts(counts, cfg, renormalize=renormalize, include_self=include_self)
    return replace(metrics, participant_id=seq.participant_id, role=seq.role,
                   stage_label=seq.stage_label, session_id=seq.session_id)
