"""
Weighted directed AOI networks: construction, motifs and DOT / JSON export.
"""

from json import dumps, loads
from typing import Any, Dict, List, Mapping, Optional, Sequence

import graphviz
import networkx as nx

from gazetna.gtna import GazeTna
from gazetna.ir.motif import Motif, MotifKind
from gazetna.ir.transition_counts import TransitionCounts
from gazetna.ir.transition_matrix import TransitionMatrix
from gazetna.ir.tna_network import NetworkEdge, NetworkNode, TnaNetwork

NODE_WIDTH_SCALE = 2.0
MIN_NODE_WIDTH = 0.1
PENWIDTH_SCALE = 8.0
SELF_LOOP_COLOR = 'red'


def build_network(p: TransitionMatrix, c: TransitionCounts, min_prob: float = GazeTna.DEFAULT_MIN_PROB,
                  scope: Optional[Mapping[str, Any]] = None, entropy: Optional[float] = None,
                  self_loop_rate: Optional[float] = None) -> TnaNetwork:
    """
    Nodes are AOIs with fixations or incident edges; edges are the non-zero
    entries of ``p`` at or above ``min_prob``. Raw P_ii is kept on every node
    whatever the threshold.
    """
    if not 0 <= min_prob < 1:
        raise GazeTna.ConfigError(f'min_prob must be in [0, 1), got {min_prob}')
    if p.aoi_order != c.aoi_order:
        raise GazeTna.DataError('Transition matrix and counts disagree on the AOI order')
    order = p.aoi_order
    edges = []
    for i, source in enumerate(order):
        for j, target in enumerate(order):
            probability = float(p.probs[i, j])
            if probability > 0 and probability >= min_prob:
                edges.append(NetworkEdge(source, target, probability, int(c.counts[i, j])))
    incident = {e.source for e in edges} | {e.target for e in edges}
    nodes = tuple(NetworkNode(label, int(c.fixation_totals[i]), float(p.probs[i, i]))
                  for i, label in enumerate(order)
                  if c.fixation_totals[i] > 0 or label in incident)
    metadata = {
        'scope': dict(scope or {}),
        'alpha': p.alpha,
        'min_prob': min_prob,
        'entropy': entropy,
        'self_loop_rate': self_loop_rate,
        'aoi_order': list(order),
        'n_fixations': c.n_fixations,
        'n_transitions': c.n_transitions,
    }
    return TnaNetwork(nodes, tuple(edges), metadata)


def to_digraph(net: TnaNetwork, threshold: float = 0.0) -> nx.DiGraph:
    graph = nx.DiGraph()
    for node in net.nodes:
        graph.add_node(node.aoi_label, fixations=node.fixation_total, self_loop=node.raw_self_loop_prob)
    for edge in net.edges:
        if not edge.is_self_loop and edge.probability >= threshold:
            graph.add_edge(edge.source, edge.target, weight=edge.probability, count=edge.raw_count)
    return graph


def find_motifs(net: TnaNetwork, threshold: float = GazeTna.DEFAULT_MOTIF_THRESHOLD) -> List[Motif]:
    """
    Dyads are reciprocal pairs, triads directed 3-cycles (either orientation,
    reported once), every edge at or above ``threshold``. Self-loops never count.
    """
    if not 0 < threshold <= 1:
        raise GazeTna.ConfigError(f'Motif threshold must be in (0, 1], got {threshold}')
    graph = to_digraph(net, threshold)
    rank = {node.aoi_label: index for index, node in enumerate(net.nodes)}
    strongest: Dict[tuple, float] = {}
    for cycle in nx.simple_cycles(graph, length_bound=3):
        if len(cycle) < 2:
            continue
        weakest = min(graph[a][b]['weight'] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
        members = tuple(sorted(cycle, key=rank.get))
        strongest[members] = max(weakest, strongest.get(members, 0.0))
    motifs = [Motif(MotifKind.dyad if len(members) == 2 else MotifKind.triad, members, weakest)
              for members, weakest in strongest.items()]
    motifs.sort(key=lambda m: (-m.min_edge_prob, len(m.members), [rank[a] for a in m.members]))
    return motifs


def _number(value: float) -> str:
    return format(value, f'.{GazeTna.SIGNIFICANT_DIGITS}g')


def _header(net: TnaNetwork) -> str:
    scope = net.metadata.get('scope') or {}
    described = ' '.join(f'{key}={scope[key]}' for key in sorted(scope)) or 'all'
    alpha = net.metadata.get('alpha')
    min_prob = net.metadata.get('min_prob')
    return (f'gazetna transition network ({GazeTna.NETWORK_SCHEMA}) scope: {described}'
            f' alpha={_number(alpha) if alpha is not None else "-"}'
            f' min_prob={_number(min_prob) if min_prob is not None else "-"}')


def export_dot(net: TnaNetwork) -> str:
    """
    Graphviz DOT source, nodes and edges in AOI order.

    Node width is proportional to the fixation total, the busiest AOI getting
    ``NODE_WIDTH_SCALE``; widths never drop below ``MIN_NODE_WIDTH``, so AOIs
    reached only through edges stay drawable. Edge penwidth follows the
    transition probability and self-loops are red.
    """
    for node in net.nodes:
        if ':' in node.aoi_label:
            raise GazeTna.DataError(f'Sorry, I can\'t export AOI {node.aoi_label!r} to DOT, ":" marks a port there')
    dot = graphviz.Digraph('tna', comment=_header(net))
    heaviest = max((node.fixation_total for node in net.nodes), default=0)
    for node in net.nodes:
        width = NODE_WIDTH_SCALE * node.fixation_total / heaviest if heaviest else 0.0
        dot.node(node.aoi_label, label=f'{node.aoi_label} ({node.fixation_total})',
                 width=_number(max(width, MIN_NODE_WIDTH)), self_loop=_number(node.raw_self_loop_prob))
    for edge in net.edges:
        attributes = {
            'penwidth': _number(PENWIDTH_SCALE * edge.probability),
            'weight': _number(edge.probability),
            'count': str(edge.raw_count),
        }
        if edge.is_self_loop:
            attributes['color'] = SELF_LOOP_COLOR
        dot.edge(edge.source, edge.target, label=_number(edge.probability), **attributes)
    return dot.source


def _rounded(value: Any, full_precision: bool) -> Any:
    if isinstance(value, float) and not full_precision:
        return float(_number(value))
    if isinstance(value, dict):
        return {key: _rounded(item, full_precision) for key, item in value.items()}
    if isinstance(value, list):
        return [_rounded(item, full_precision) for item in value]
    return value


def export_json(net: TnaNetwork, full_precision: bool = False) -> str:
    """Canonical JSON: sorted keys, compact separators, floats at 6 significant digits."""
    document = {
        'schema': GazeTna.NETWORK_SCHEMA,
        'nodes': [node.as_dict() for node in net.nodes],
        'edges': [edge.as_dict() for edge in net.edges],
        'metadata': net.as_dict()['metadata'],
    }
    return dumps(_rounded(document, full_precision), sort_keys=True, separators=(',', ':')) + '\n'


def parse_network_json(text: str) -> TnaNetwork:
    try:
        document = loads(text)
        schema = document.get('schema')
        if schema != GazeTna.NETWORK_SCHEMA:
            raise GazeTna.InputError(f'Sorry, I can\'t read network schema: {schema}')
        nodes = tuple(NetworkNode(n['aoi_label'], int(n['fixation_total']), float(n['raw_self_loop_prob']))
                      for n in document['nodes'])
        edges = tuple(NetworkEdge(e['source'], e['target'], float(e['probability']), int(e['raw_count']))
                      for e in document['edges'])
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise GazeTna.InputError(f'Malformed network JSON: {e}')
    return TnaNetwork(nodes, edges, dict(document.get('metadata') or {}))


def self_loop_shift(networks: Mapping[str, TnaNetwork], order: Sequence[str] = None) -> List[Dict[str, Any]]:
    """
    Raw P_ii per AOI across consecutive stages (in mapping order): one row per
    AOI and stage pair with the values before and after and their difference.
    """
    stages = list(networks)
    if order is None:
        order = []
        for net in networks.values():
            order.extend(label for label in net.metadata.get('aoi_order', [n.aoi_label for n in net.nodes])
                         if label not in order)
    rows = []
    for before, after in zip(stages, stages[1:]):
        for label in order:
            first, second = networks[before].node(label), networks[after].node(label)
            if first is None or second is None:
                continue
            rows.append({
                'aoi': label,
                'from_stage': before,
                'to_stage': after,
                'before': first.raw_self_loop_prob,
                'after': second.raw_self_loop_prob,
                'delta': second.raw_self_loop_prob - first.raw_self_loop_prob,
            })
    return rows
