"""
Brute-force reference for the transition metrics: plain loops and math.log2,
evaluated literally from the definitions. Used as the test oracle.
"""

import math
from typing import List, Optional, Sequence


def counts(labels: Sequence[str], order: Sequence[str]) -> List[List[int]]:
    table = [[0] * len(order) for _ in order]
    for a, b in zip(labels, labels[1:]):
        table[order.index(a)][order.index(b)] += 1
    return table


def probabilities(labels: Sequence[str], order: Sequence[str], alpha: float = 0.5) -> List[List[float]]:
    k = len(order)
    result = []
    for row in counts(labels, order):
        support = sum(row)
        if support == 0:
            result.append([0.0] * k)
            continue
        result.append([(c + alpha) / (support + k * alpha) for c in row])
    return result


def row_entropy(row: Sequence[float], i: int) -> float:
    off = [p for j, p in enumerate(row) if j != i]
    total = sum(off)
    h = 0.0
    for p in off:
        q = p / total
        if q > 0:
            h -= q * math.log2(q)
    return h


def entropy(labels: Sequence[str], order: Sequence[str], alpha: float = 0.5) -> Optional[float]:
    p = probabilities(labels, order, alpha)
    rows = [row_entropy(row, i) for i, row in enumerate(p) if sum(row) > 0]
    if not rows:
        return None
    return sum(rows) / len(rows)


def self_loop(labels: Sequence[str], order: Sequence[str], alpha: float = 0.5) -> float:
    p = probabilities(labels, order, alpha)
    n = len(labels)
    rate = 0.0
    for i, label in enumerate(order):
        w = sum(1 for x in labels if x == label) / n
        rate += w * p[i][i]
    return rate
