"""
3SUM-Indexing core: canonical instances, brute-force oracles and the
single-set transform
"""

from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import InvalidParameters, ParameterOverflow
from ..models.cellprobe import Memory
from ..models.instance import SingleSetInstance, SumsetAnswer, TsumInstance
from ..models.reports import VerifyReport, ViolationRecord
from ..monitoring.metrics import MetricsCollector
from ..monitoring.progress import track
from .cellprobe import run_query
from .groups import AnyGroup, adder, product, sample_distinct, subtractor, validate, xor_group

if TYPE_CHECKING:
    from .solutions.base import CellProbeSolution

logger = structlog.get_logger()

# Hardness conjectures for 3SUM-Indexing, used to annotate reports only
CONJECTURES: Dict[str, str] = {
    "strong": "any solution with T = O~(1) probes needs S = Omega~(n^2) cells",
    "tradeoff": "any solution satisfies S * T = Omega~(n^2)",
    "weak": "any solution with T = O~(1) probes needs S = Omega(n^(1+c)) cells for some c > 0",
}

NO_WITNESS = SumsetAnswer(exists=False)


def _pad(values: List[int], size: int) -> List[int]:
    present = set(values)
    candidate = 0
    while len(values) < size:
        if candidate not in present:
            values.append(candidate)
        candidate += 1
    return sorted(values)


def make_instance(group: AnyGroup, A1: Iterable[int], A2: Iterable[int]) -> TsumInstance:
    """
    Canonicalize two element collections: sort, deduplicate and pad the
    smaller side with the smallest unused ids until both have size n.
    """
    first = sorted({validate(group, a) for a in A1})
    second = sorted({validate(group, a) for a in A2})
    size = max(len(first), len(second))
    if size > group.order:
        raise InvalidParameters("set larger than group", n=size, order=group.order)
    return TsumInstance(group=group, A1=_pad(first, size), A2=_pad(second, size))


def random_instance(group: AnyGroup, n: int, rng: np.random.Generator) -> TsumInstance:
    cap = get_settings().max_set_size
    if n > cap:
        raise ParameterOverflow("n exceeds set size cap", n=n, cap=cap)
    return TsumInstance(
        group=group,
        A1=sample_distinct(rng, group.order, n),
        A2=sample_distinct(rng, group.order, n),
    )


def brute_force_query(instance: TsumInstance, z: int) -> SumsetAnswer:
    """Smallest (a1, a2) in A1 x A2 with a1 + a2 = z, or no witness"""
    validate(instance.group, z)
    sub = subtractor(instance.group)
    second = set(instance.A2)
    for a1 in instance.A1:
        a2 = sub(z, a1)
        if a2 in second:
            return SumsetAnswer(exists=True, witness=(a1, a2))
    return NO_WITNESS


def sumset_witnesses(instance: TsumInstance) -> Dict[int, Tuple[int, int]]:
    """Lexicographically smallest witness for every z in A1 + A2"""
    plus = adder(instance.group)
    witnesses: Dict[int, Tuple[int, int]] = {}
    for a1 in instance.A1:
        for a2 in instance.A2:
            witnesses.setdefault(plus(a1, a2), (a1, a2))
    return witnesses


def sumset(instance: TsumInstance) -> Set[int]:
    return set(sumset_witnesses(instance))


def check_answer(instance: TsumInstance, z: int, answer: SumsetAnswer, expected: Optional[SumsetAnswer] = None) -> Optional[str]:
    """Reason the answer disagrees with the oracle, or None"""
    expected = expected or brute_force_query(instance, z)
    if answer.exists != expected.exists:
        return f"exists={answer.exists} but oracle says {expected.exists}"
    if answer.witness is not None:
        a1, a2 = answer.witness
        if a1 not in instance.A1 or a2 not in instance.A2:
            return "witness components are not set members"
        if adder(instance.group)(a1, a2) != z:
            return "witness does not sum to the query"
    return None


def to_single_set(instance: TsumInstance) -> Tuple[SingleSetInstance, Callable[[int], int]]:
    """
    Embed into Product(Xor(1), G): A = {0} x A1 union {1} x A2, and a
    two-set query z becomes the single-set query (1, z).
    """
    order = instance.group.order
    group = product(xor_group(1), instance.group)
    elements = list(instance.A1) + [order + a2 for a2 in instance.A2]

    def query_map(z: int) -> int:
        validate(instance.group, z)
        return order + z

    return SingleSetInstance(group=group, A=elements), query_map


def brute_force_single_query(single: SingleSetInstance, q: int) -> SumsetAnswer:
    """Smallest pair x < y of distinct elements of A with x + y = q"""
    validate(single.group, q)
    sub = subtractor(single.group)
    members = set(single.A)
    for x in single.A:
        y = sub(q, x)
        if y > x and y in members:
            return SumsetAnswer(exists=True, witness=(x, y))
    return NO_WITNESS


def from_single_witness(instance: TsumInstance, witness: Sequence[int]) -> Tuple[int, int]:
    """Map a single-set witness ((0,a1),(1,a2)) back to (a1, a2)"""
    order = instance.group.order
    x, y = sorted(witness)
    return x % order, y % order


def sweep_solution(
    solution: "CellProbeSolution",
    memory: Memory,
    instance: TsumInstance,
    queries: Optional[Iterable[int]] = None,
) -> VerifyReport:
    """Compare a solution with the oracle on every query (all of G by default)"""
    group = instance.group
    targets = range(group.order) if queries is None else list(queries)
    witnesses = sumset_witnesses(instance)
    violations: List[ViolationRecord] = []
    total = 0
    worst = 0
    checked = 0
    for z in track(targets, desc=f"verify {solution.name}", total=len(targets)):
        answer, transcript = run_query(solution, memory, z)
        checked += 1
        total += len(transcript)
        worst = max(worst, len(transcript))
        pair = witnesses.get(z)
        expected = SumsetAnswer(exists=True, witness=pair) if pair else NO_WITNESS
        reason = check_answer(instance, z, answer, expected)
        if reason:
            violations.append(ViolationRecord(z=z, expected=expected.exists, got=answer.exists, reason=reason))
    MetricsCollector.record_violations("oracle", len(violations))
    logger.info(
        "Solution swept against oracle",
        solution=solution.name,
        queries=checked,
        violations=len(violations),
        max_probes=worst,
    )
    return VerifyReport(
        schema_version=get_settings().schema_version,
        group=group.label(),
        n=instance.n,
        solution=solution.info(),
        queries_checked=checked,
        violations=violations,
        max_probes=worst,
        mean_probes=total / checked if checked else 0.0,
        conjectures=CONJECTURES,
    )
