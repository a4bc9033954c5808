"""
Auditor for non-adaptive two-probe bit schemes (T = 2, w = 1)

Each query q reads cells u(q), v(q) and outputs f_q(bit_u, bit_v), where
the truth table f_q is a 4-bit integer holding f(a, b) at bit 2a + b.
Queries form a multigraph on the cells; short single-type cycles, hubs and
parallel bundles yield query sets whose answers cannot all be right under
the independent-coins input distribution.
"""

from collections import defaultdict, deque
from enum import Enum
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import get_settings
from ..exceptions import DegreeTooSmall, GroupTooSmall
from ..models.cellprobe import Memory
from ..models.group import GroupSpec
from ..models.instance import SumsetAnswer, TsumInstance
from ..models.reports import GirthReport, RefutationOutcome, RefutationVerdict
from .adversarial import minimum_group_order, realize_all
from .cellprobe import ProbeHandle
from .solutions.base import CellProbeSolution
from .tsum import sumset

logger = structlog.get_logger()

PreprocessingMap = Callable[[TsumInstance], Sequence[int]]


class FunctionType(str, Enum):
    CONST = "const"
    COPY = "copy"
    AND = "and"
    XOR = "xor"


def truth_value(table: int, a: int, b: int) -> int:
    return (table >> (2 * a + b)) & 1


def classify_truth_table(table: int) -> FunctionType:
    ones = bin(table & 0xF).count("1")
    if ones in (0, 4):
        return FunctionType.CONST
    if ones in (1, 3):
        return FunctionType.AND
    if table in (0b0110, 0b1001):
        return FunctionType.XOR
    return FunctionType.COPY


def copy_source(table: int) -> int:
    """0 if a copy table depends on the first read bit, 1 for the second"""
    return 0 if truth_value(table, 0, 0) != truth_value(table, 1, 0) else 1


def rare_input(table: int) -> Tuple[int, Tuple[int, int]]:
    """For an AND-type table: the output taken on exactly one input, and that input"""
    counts: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for a, b in cartesian((0, 1), repeat=2):
        counts[truth_value(table, a, b)].append((a, b))
    output = 1 if len(counts[1]) == 1 else 0
    return output, counts[output][0]


class QueryProbes(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: int = Field(..., ge=0)
    v: int = Field(..., ge=0)
    table: int = Field(..., ge=0, le=15)


class TwoProbeScheme(BaseModel):
    """Per-query probe pair and truth table, indexed by group element id"""

    model_config = ConfigDict(frozen=True)

    group: GroupSpec
    cells: int = Field(..., ge=1)
    queries: List[QueryProbes]

    @model_validator(mode="after")
    def validate_queries(self) -> "TwoProbeScheme":
        if len(self.queries) != self.group.order:
            raise ValueError("scheme needs one entry per group element")
        for probes in self.queries:
            if probes.u >= self.cells or probes.v >= self.cells:
                raise ValueError("probe outside memory")
        return self

    def answer(self, q: int, bits: Sequence[int]) -> int:
        probes = self.queries[q]
        return truth_value(probes.table, bits[probes.u], bits[probes.v])


def trivial_scheme(group: GroupSpec) -> TwoProbeScheme:
    """One cell per element, each query copies its own cell"""
    return TwoProbeScheme(
        group=group,
        cells=group.order,
        queries=[QueryProbes(u=q, v=q, table=0b1100) for q in range(group.order)],
    )


def sumset_bits(instance: TsumInstance) -> List[int]:
    """Preprocessing map of the trivial scheme"""
    sums = sumset(instance)
    return [int(z in sums) for z in range(instance.group.order)]


def effective_type(probes: QueryProbes) -> Tuple[FunctionType, Tuple[int, ...]]:
    """Type and the cells the answer depends on; one-cell queries collapse to one-bit functions"""
    if probes.u == probes.v:
        low, high = truth_value(probes.table, 0, 0), truth_value(probes.table, 1, 1)
        if low == high:
            return FunctionType.CONST, ()
        return FunctionType.COPY, (probes.u,)
    kind = classify_truth_table(probes.table)
    if kind == FunctionType.CONST:
        return kind, ()
    if kind == FunctionType.COPY:
        return kind, ((probes.u, probes.v)[copy_source(probes.table)],)
    return kind, (probes.u, probes.v)


def query_graph(scheme: TwoProbeScheme) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(scheme.cells))
    for q, probes in enumerate(scheme.queries):
        graph.add_edge(probes.u, probes.v, key=q, type=classify_truth_table(probes.table).value)
    return graph


def shortest_cycle(graph: nx.MultiGraph) -> Optional[Tuple[List[int], List[int]]]:
    """
    Shortest cycle of a multigraph ignoring self-loops, as (edge keys,
    nodes) in traversal order. Parallel edges form 2-cycles.
    """
    for u, v in graph.edges():
        if u != v and graph.number_of_edges(u, v) >= 2:
            keys = sorted(graph[u][v])[:2]
            return keys, [u, v]
    best: Optional[Tuple[List[int], List[int]]] = None
    best_length = None
    for root in sorted(graph.nodes()):
        parent: Dict[int, Tuple[Optional[int], Optional[int]]] = {root: (None, None)}
        depth = {root: 0}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if best_length is not None and 2 * depth[x] >= best_length:
                break
            for y, edges in sorted(graph[x].items()):
                if y == x:
                    continue
                for key in sorted(edges):
                    if key == parent[x][1]:
                        continue
                    if y not in depth:
                        depth[y] = depth[x] + 1
                        parent[y] = (x, key)
                        queue.append(y)
                    else:
                        length = depth[x] + depth[y] + 1
                        if best_length is None or length < best_length:
                            best_length = length
                            best = _close_cycle(parent, x, y, key)
    return best


def _close_cycle(parent, x: int, y: int, key: int) -> Tuple[List[int], List[int]]:
    def to_root(node: int) -> Tuple[List[int], List[int]]:
        nodes, keys = [node], []
        while parent[node][0] is not None:
            node, edge = parent[node]
            keys.append(edge)
            nodes.append(node)
        return nodes, keys

    x_nodes, x_keys = to_root(x)
    y_nodes, y_keys = to_root(y)
    nodes = list(reversed(x_nodes)) + y_nodes[:-1]
    keys = list(reversed(x_keys)) + [key] + y_keys
    return keys, nodes


def measure_girth(graph: nx.MultiGraph) -> Optional[int]:
    cycle = shortest_cycle(graph)
    return len(cycle[0]) if cycle else None


def analytic_max_girth(nodes: int, average_degree: float) -> Optional[int]:
    """Largest r with 2 (d - 2)^(r/2 - 2) <= nodes; None when d <= 3 leaves r unbounded"""
    if average_degree <= 2:
        raise DegreeTooSmall("average degree must exceed 2", degree=average_degree)
    if average_degree <= 3:
        return None
    base = average_degree - 2
    r = 0
    while 2 * base ** ((r + 1) / 2 - 2) <= nodes:
        r += 1
    return r


def girth_bound_check(nodes: int, edges: int, graph: Optional[nx.MultiGraph] = None) -> GirthReport:
    degree = 2 * edges / nodes
    bound = analytic_max_girth(nodes, degree)
    measured = measure_girth(graph) if graph is not None else None
    consistent = measured is None or bound is None or measured <= bound
    if not consistent:
        logger.warning("Girth exceeds analytic bound", measured=measured, bound=bound)
    return GirthReport(
        schema_version=get_settings().schema_version,
        nodes=nodes,
        edges=edges,
        average_degree=degree,
        analytic_max_girth=bound,
        measured_girth=measured,
        consistent=consistent,
    )


def _typed_subgraph(scheme: TwoProbeScheme, kind: FunctionType) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    for q, probes in enumerate(scheme.queries):
        found, cells = effective_type(probes)
        if found == kind and len(cells) == 2:
            graph.add_edge(probes.u, probes.v, key=q)
    return graph


def find_refutation_witness(scheme: TwoProbeScheme, n_param: Optional[int] = None) -> RefutationVerdict:
    version = get_settings().schema_version

    def verdict(kind: str, queries: List[int], nodes: List[int], **extra) -> RefutationVerdict:
        return RefutationVerdict(
            schema_version=version,
            kind=kind,
            queries=queries,
            nodes=nodes,
            n_param=n_param or len(queries),
            **extra,
        )

    effective = [effective_type(probes) for probes in scheme.queries]
    for q, (kind, _) in enumerate(effective):
        if kind == FunctionType.CONST:
            return verdict("ConstQuery", [q], [])

    bundles: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for q, probes in enumerate(scheme.queries):
        if probes.u != probes.v:
            bundles[(min(probes.u, probes.v), max(probes.u, probes.v))].append(q)
    for pair, queries in sorted(bundles.items()):
        if len(queries) >= 3:
            return verdict("ParallelTriple", queries[:3], list(pair))

    hubs: Dict[int, List[int]] = defaultdict(list)
    for q, (kind, cells) in enumerate(effective):
        if kind == FunctionType.COPY:
            hubs[cells[0]].append(q)
    for node, queries in sorted(hubs.items()):
        if len(queries) >= 2:
            return verdict("CopyHub", queries[:2], [node])

    candidates = []
    for kind in (FunctionType.AND, FunctionType.XOR):
        cycle = shortest_cycle(_typed_subgraph(scheme, kind))
        if cycle:
            candidates.append((len(cycle[0]), kind, cycle))
    if candidates:
        _, kind, (keys, nodes) = min(candidates, key=lambda item: item[0])
        if kind == FunctionType.AND:
            output, _ = rare_input(scheme.queries[keys[0]].table)
            return verdict("AndCycle", keys, nodes, rare_output=output)
        parity = 0
        for q in keys:
            parity ^= truth_value(scheme.queries[q].table, 0, 0)
        return verdict("XorCycle", keys, nodes, parity=parity)
    return verdict("NotRefuted", [], [])


def achievable_patterns(scheme: TwoProbeScheme, Q: Sequence[int]) -> Set[Tuple[int, ...]]:
    """Answer vectors on Q over every assignment of the cells Q reads"""
    touched = sorted({cell for q in Q for cell in (scheme.queries[q].u, scheme.queries[q].v)})
    position = {cell: i for i, cell in enumerate(touched)}
    patterns = set()
    for bits in cartesian((0, 1), repeat=len(touched)):
        patterns.add(
            tuple(
                truth_value(scheme.queries[q].table, bits[position[scheme.queries[q].u]], bits[position[scheme.queries[q].v]])
                for q in Q
            )
        )
    return patterns


def empirical_refute(
    scheme: TwoProbeScheme,
    Q_witness: Sequence[int],
    n_param: Optional[int] = None,
    preprocess: Optional[PreprocessingMap] = None,
    verdict: str = "",
) -> RefutationOutcome:
    """
    Realize every subset pattern of Q. Without a preprocessing map, report a
    pattern no memory content can produce; with one, report the first
    instance it misanswers.
    """
    Q = sorted(set(Q_witness))
    n = n_param or max(1, len(Q))
    if scheme.group.order < minimum_group_order(n):
        raise GroupTooSmall("group order must exceed 2n^2 + 2n", order=scheme.group.order, n=n)
    realizations = realize_all(scheme.group, Q, n)
    achievable = achievable_patterns(scheme, Q)
    outcome = dict(
        schema_version=get_settings().schema_version,
        verdict=verdict,
        Q=Q,
        patterns_total=len(realizations),
        patterns_achievable=len(achievable),
    )
    for realization in realizations:
        expected = tuple(int(q in realization.P) for q in Q)
        if preprocess is not None:
            bits = list(preprocess(realization.instance))
            for q, truth in zip(Q, expected):
                got = scheme.answer(q, bits)
                if got != truth:
                    return RefutationOutcome(
                        status="refuted", P=realization.P, pattern=list(expected),
                        instance=realization.instance, query=q, expected=bool(truth), got=bool(got),
                        **outcome,
                    )
        elif expected not in achievable:
            return RefutationOutcome(
                status="refuted", P=realization.P, pattern=list(expected),
                instance=realization.instance, **outcome,
            )
    if verdict and verdict != "NotRefuted":
        logger.error("Refutation witness survived every pattern", verdict=verdict, Q=Q)
    return RefutationOutcome(status="consistent", **outcome)


class TwoProbeSolution(CellProbeSolution):
    """A two-probe bit scheme run as a cell-probe solution with w = 1"""

    name = "two-probe"
    adaptive = False

    def __init__(self, scheme: TwoProbeScheme, n: int, preprocess: PreprocessingMap = sumset_bits):
        super().__init__(scheme.group, n, 1)
        self.scheme = scheme
        self._preprocess = preprocess

    @property
    def S(self) -> int:
        return self.scheme.cells

    @property
    def T(self) -> int:
        return 2

    def preprocess(self, instance: TsumInstance) -> Memory:
        self.check_instance(instance)
        return Memory.from_words(self._preprocess(instance), 1)

    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        probes = self.scheme.queries[z]
        a = handle.read(probes.u)
        b = handle.read(probes.v)
        return SumsetAnswer(exists=bool(truth_value(probes.table, a, b)))
