"""
Reduction from reachability in butterfly graphs to 3SUM-Indexing

A node label is a d-digit base-B number. The edge (k, i, j) of layer k joins
labels that differ at most in digit k. Group elements use 2(d+2) digits,
most significant first:

    layer (base 4d) | presence (base 3, or 2 for XOR) | d s-digits | d t-digits | 2 trailing

Edges go to A1 with their presence bit; A2 holds, for every layer k, the
negated layer digit with wildcards in every position the edge does not fix.
A query (s, t) has a witness exactly when some edge of the unique s->t path
is missing.
"""

from enum import Enum
from functools import lru_cache
from itertools import product as cartesian
from math import log
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import LabelOutOfRange, ParameterOverflow, UnsupportedMode
from ..models.instance import ButterflyInstance, TsumInstance
from ..models.reports import ButterflyAnalysis, ButterflyEquivalenceReport, ButterflyViolation
from ..monitoring.metrics import MetricsCollector
from .codec import CodecMode, MixedRadixCodec
from .tsum import brute_force_query

logger = structlog.get_logger()

Edge = Tuple[int, int, int]


class ButterflyMode(str, Enum):
    CYCLIC = "cyclic"
    XOR = "xor"


def _is_power_of_two(value: int) -> bool:
    return value > 0 and not value & (value - 1)


def node_count(B: int, d: int) -> int:
    return B**d


def edge_count(B: int, d: int) -> int:
    return d * B ** (d + 1)


def label_digits(B: int, d: int, label: int) -> List[int]:
    """Digits of a node label, least significant first"""
    if not 0 <= label < B**d:
        raise LabelOutOfRange("node label outside [B^d]", label=label, B=B, d=d)
    digits = []
    for _ in range(d):
        label, digit = divmod(label, B)
        digits.append(digit)
    return digits


def _label(B: int, digits: List[int]) -> int:
    value = 0
    for digit in reversed(digits):
        value = value * B + digit
    return value


def edge_index(B: int, d: int, k: int, i: int, j: int) -> int:
    """Position of edge (k, i, j) in (layer, source, target digit) order"""
    return (k * B**d + i) * B + label_digits(B, d, j)[k]


def edge_at(B: int, d: int, index: int) -> Edge:
    rest, digit = divmod(index, B)
    k, i = divmod(rest, B**d)
    digits = label_digits(B, d, i)
    digits[k] = digit
    return k, i, _label(B, digits)


def template_edges(B: int, d: int) -> Iterator[Edge]:
    for index in range(edge_count(B, d)):
        yield edge_at(B, d, index)


def canonical_path(B: int, d: int, s: int, t: int) -> List[Edge]:
    """The unique s -> t path: edge k leaves (s digits >= k, t digits < k)"""
    sd = label_digits(B, d, s)
    td = label_digits(B, d, t)
    path = []
    for k in range(d):
        source = td[:k] + sd[k:]
        target = td[: k + 1] + sd[k + 1 :]
        path.append((k, _label(B, source), _label(B, target)))
    return path


def reachable(instance: ButterflyInstance, s: int, t: int) -> bool:
    B, d = instance.B, instance.d
    return all(instance.is_present(edge_index(B, d, k, i, j)) for k, i, j in canonical_path(B, d, s, t))


def butterfly_graph(instance: ButterflyInstance) -> nx.DiGraph:
    """Present edges as a layered digraph on (layer, label) nodes"""
    B, d = instance.B, instance.d
    graph = nx.DiGraph()
    graph.add_nodes_from((layer, label) for layer in range(d + 1) for label in range(B**d))
    for index, (k, i, j) in enumerate(template_edges(B, d)):
        if instance.is_present(index):
            graph.add_edge((k, i), (k + 1, j))
    return graph


def bfs_reachable(graph: nx.DiGraph, d: int, s: int, t: int) -> bool:
    return nx.has_path(graph, (0, s), (d, t))


def full_graph(B: int, d: int) -> ButterflyInstance:
    return ButterflyInstance(B=B, d=d, edges="1" * edge_count(B, d))


def empty_graph(B: int, d: int) -> ButterflyInstance:
    return ButterflyInstance(B=B, d=d, edges="0" * edge_count(B, d))


def random_subgraph(B: int, d: int, rng: np.random.Generator, density: float = 0.5) -> ButterflyInstance:
    bits = rng.random(edge_count(B, d)) < density
    return ButterflyInstance(B=B, d=d, edges="".join("1" if bit else "0" for bit in bits))


def remove_edges(instance: ButterflyInstance, indices: List[int]) -> ButterflyInstance:
    edges = list(instance.edges)
    for index in indices:
        edges[index] = "0"
    return ButterflyInstance(B=instance.B, d=instance.d, edges="".join(edges))


def _check_mode(B: int, d: int, mode: ButterflyMode) -> None:
    if mode == ButterflyMode.XOR and not (_is_power_of_two(B) and _is_power_of_two(d)):
        raise UnsupportedMode("XOR encoding needs B and d powers of two", B=B, d=d)


@lru_cache(maxsize=64)
def codec_layout(B: int, d: int, mode: ButterflyMode) -> MixedRadixCodec:
    """Digit bases, least significant first"""
    # order = 4d * presence * B^(2d+2) against n^2 = (d * B^(d+1))^2, a ratio of
    # 12/d (cyclic) or 8/d (xor); the quadratic bound is checked as order <= 12 * n^2
    _check_mode(B, d, mode)
    presence = 2 if mode == ButterflyMode.XOR else 3
    most_significant_first = [4 * d, presence] + [B] * (2 * d + 2)
    codec_mode = CodecMode.XOR_DIGITWISE if mode == ButterflyMode.XOR else CodecMode.CYCLIC_CARRY
    return MixedRadixCodec(bases=tuple(reversed(most_significant_first)), mode=codec_mode)


def _compose(B: int, d: int, mode: ButterflyMode, layer: int, presence: int,
             s_block: List[int], t_block: List[int], trailing: Tuple[int, int]) -> int:
    """Blocks are given by label digit h (least significant first)"""
    codec = codec_layout(B, d, mode)
    most_significant_first = [layer, presence]
    most_significant_first += list(reversed(s_block))
    most_significant_first += list(reversed(t_block))
    most_significant_first += list(trailing)
    return codec.encode(list(reversed(most_significant_first)))


def negated_layer(d: int, k: int, mode: ButterflyMode) -> int:
    if mode == ButterflyMode.XOR:
        return (4 * d - 1) ^ k
    return (4 * d - k) % (4 * d)


def encode_edge(B: int, d: int, mode: ButterflyMode, edge: Edge, present: bool) -> int:
    k, i, j = edge
    idig = label_digits(B, d, i)
    jdig = label_digits(B, d, j)
    s_block = [idig[h] if h >= k else 0 for h in range(d)]
    t_block = [jdig[h] if h <= k else 0 for h in range(d)]
    return _compose(B, d, mode, k, int(present), s_block, t_block, (0, 0))


@lru_cache(maxsize=64)
def wildcard_elements(B: int, d: int, mode: ButterflyMode) -> Tuple[int, ...]:
    """A2: for each layer k, all completions of the s-digits below k, t-digits above k and trailing pair"""
    elements = []
    for k in range(d):
        free = k + (d - 1 - k) + 2
        for values in cartesian(range(B), repeat=free):
            low = list(values[:k])
            high = list(values[k : d - 1])
            s_block = low + [0] * (d - k)
            t_block = [0] * (k + 1) + high
            elements.append(
                _compose(B, d, mode, negated_layer(d, k, mode), 0, s_block, t_block, (values[-2], values[-1]))
            )
    return tuple(sorted(elements))


def encode_instance(instance: ButterflyInstance, mode: ButterflyMode = ButterflyMode.CYCLIC) -> TsumInstance:
    B, d = instance.B, instance.d
    codec = codec_layout(B, d, mode)
    cap = get_settings().max_group_order
    if codec.order > cap:
        raise ParameterOverflow("butterfly group exceeds cap", order=codec.order, cap=cap)
    first = sorted(
        encode_edge(B, d, mode, edge, instance.is_present(index))
        for index, edge in enumerate(template_edges(B, d))
    )
    return TsumInstance(group=codec.group, A1=first, A2=list(wildcard_elements(B, d, mode)))


def encode_query(B: int, d: int, s: int, t: int, mode: ButterflyMode = ButterflyMode.CYCLIC) -> int:
    layer = 4 * d - 1 if mode == ButterflyMode.XOR else 0
    return _compose(B, d, mode, layer, 0, label_digits(B, d, s), label_digits(B, d, t), (0, 0))


def query_table(B: int, d: int, mode: ButterflyMode = ButterflyMode.CYCLIC) -> Dict[Tuple[int, int], int]:
    nodes = B**d
    return {(s, t): encode_query(B, d, s, t, mode) for s in range(nodes) for t in range(nodes)}


def check_equivalence(instance: ButterflyInstance, mode: ButterflyMode = ButterflyMode.CYCLIC) -> ButterflyEquivalenceReport:
    """For every (s, t): the encoded query has a witness iff s cannot reach t"""
    B, d = instance.B, instance.d
    encoded = encode_instance(instance, mode)
    violations = []
    queries = query_table(B, d, mode)
    for (s, t), z in queries.items():
        has_witness = brute_force_query(encoded, z).exists
        is_reachable = reachable(instance, s, t)
        if has_witness == is_reachable:
            violations.append(ButterflyViolation(s=s, t=t, has_witness=has_witness, reachable=is_reachable))
    MetricsCollector.record_violations("butterfly", len(violations))
    n = edge_count(B, d)
    order = encoded.group.order
    logger.debug("Butterfly equivalence checked", B=B, d=d, mode=mode.value, violations=len(violations))
    return ButterflyEquivalenceReport(
        schema_version=get_settings().schema_version,
        B=B,
        d=d,
        mode=mode.value,
        n=n,
        group_order=order,
        order_ratio=order / (n * n),
        queries_checked=len(queries),
        violations=violations,
    )


def parameter_analysis(S: int, w: int, n: int) -> ButterflyAnalysis:
    """B = S w^2 / n, the implied depth and the value of log n / log(S w / n)"""
    B = S * w * w / n
    depth = log(n) / log(B) if B > 1 else None
    ratio = S * w / n
    lower = log(n) / log(ratio) if ratio > 1 else None
    return ButterflyAnalysis(
        schema_version=get_settings().schema_version,
        S=S,
        w=w,
        n=n,
        B=B,
        B_at_least_w_squared=S >= n,
        depth_estimate=depth,
        lower_bound_value=lower,
    )


def parse_edges(B: int, d: int, spec: str, rng: Optional[np.random.Generator] = None) -> ButterflyInstance:
    """'full', 'empty', 'random' or an explicit 0/1 string"""
    if spec == "full":
        return full_graph(B, d)
    if spec == "empty":
        return empty_graph(B, d)
    if spec == "random":
        return random_subgraph(B, d, rng if rng is not None else np.random.default_rng(0))
    return ButterflyInstance(B=B, d=d, edges=spec.strip())
