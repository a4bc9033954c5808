"""
Inputs whose sumset meets a query set Q in exactly a chosen subset P

Realizations are built greedily in canonical id order, so the map
P -> (A1, A2) is deterministic. Under the uniform distribution over P the
membership indicators of Q are independent fair coins.
"""

from collections import Counter
from fractions import Fraction
from itertools import product as cartesian
from math import log2
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import GroupTooSmall, IncompleteCover, InvalidParameters
from ..models.instance import SubsetRealization, TsumInstance
from ..models.reports import EntropyReport, IndependenceReport
from ..monitoring.progress import track
from .groups import AnyGroup, adder, subtractor, validate
from .tsum import sumset

logger = structlog.get_logger()

Pattern = Tuple[int, ...]


def minimum_group_order(n: int) -> int:
    """Smallest |G| the greedy construction accepts"""
    return 2 * n * n + 2 * n + 1


class _Builder:
    """Grows A1, A2 while keeping every sum away from the forbidden queries"""

    def __init__(self, group: AnyGroup, forbidden: Set[int]):
        self.order = group.order
        self.plus = adder(group)
        self.minus = subtractor(group)
        self.forbidden = forbidden
        self.first: List[int] = []
        self.second: List[int] = []
        self.sums: Set[int] = set()

    def safe_first(self, a1: int) -> bool:
        if a1 in self.first:
            return False
        return all(self.plus(a1, a2) not in self.forbidden for a2 in self.second)

    def safe_second(self, a2: int) -> bool:
        if a2 in self.second:
            return False
        return all(self.plus(a1, a2) not in self.forbidden for a1 in self.first)

    def safe_pair(self, a1: int, a2: int) -> bool:
        return (
            self.safe_first(a1)
            and self.safe_second(a2)
            and self.plus(a1, a2) not in self.forbidden
        )

    def add_first(self, a1: int) -> None:
        self.first.append(a1)
        self.sums.update(self.plus(a1, a2) for a2 in self.second)

    def add_second(self, a2: int) -> None:
        self.second.append(a2)
        self.sums.update(self.plus(a1, a2) for a1 in self.first)

    def cover(self, p: int) -> None:
        for t in range(self.order):
            a1 = self.minus(p, t)
            if self.safe_pair(a1, t):
                self.add_first(a1)
                self.add_second(t)
                return
        raise GroupTooSmall("no safe pair covers the target", target=p, order=self.order)

    def pad_first(self) -> None:
        for a1 in range(self.order):
            if self.safe_first(a1):
                self.add_first(a1)
                return
        raise GroupTooSmall("no safe padding element for A1", order=self.order)

    def pad_second(self) -> None:
        for a2 in range(self.order):
            if self.safe_second(a2):
                self.add_second(a2)
                return
        raise GroupTooSmall("no safe padding element for A2", order=self.order)


def realize_subset(group: AnyGroup, Q: Iterable[int], P: Iterable[int], n: int) -> SubsetRealization:
    queries = sorted({validate(group, q) for q in Q})
    chosen = sorted({validate(group, p) for p in P})
    if not set(chosen) <= set(queries):
        raise InvalidParameters("P must be a subset of Q")
    if len(queries) > n:
        raise InvalidParameters("Q may hold at most n queries", q_size=len(queries), n=n)
    if group.order < minimum_group_order(n):
        raise GroupTooSmall("group order must exceed 2n^2 + 2n", order=group.order, n=n)
    builder = _Builder(group, set(queries) - set(chosen))
    for p in chosen:
        if p not in builder.sums:
            builder.cover(p)
    while len(builder.first) < n:
        builder.pad_first()
        builder.pad_second()
    instance = TsumInstance(group=group, A1=sorted(builder.first), A2=sorted(builder.second))
    return SubsetRealization(Q=queries, P=chosen, n=n, instance=instance)


def check_realization(realization: SubsetRealization) -> bool:
    """Membership and disjointness invariants by full sumset computation"""
    sums = sumset(realization.instance)
    missing = set(realization.Q) - set(realization.P)
    return (
        realization.instance.n == realization.n
        and set(realization.P) <= sums
        and not missing & sums
    )


def subsets(Q: Sequence[int]) -> List[List[int]]:
    """All subsets of sorted Q, indexed by bitmask over Q's positions"""
    ordered = sorted(Q)
    return [[q for bit, q in enumerate(ordered) if mask >> bit & 1] for mask in range(1 << len(ordered))]


def realize_all(group: AnyGroup, Q: Sequence[int], n: int) -> List[SubsetRealization]:
    every = subsets(Q)
    return [realize_subset(group, Q, P, n) for P in track(every, desc="realize", total=len(every))]


def sample_adversarial_instance(group: AnyGroup, Q: Sequence[int], n: int, seed: int) -> TsumInstance:
    return sample_realization(group, Q, n, seed).instance


def sample_realization(group: AnyGroup, Q: Sequence[int], n: int, seed: int) -> SubsetRealization:
    """P uniform over subsets of Q, then realized"""
    ordered = sorted(set(Q))
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=len(ordered))
    P = [q for q, bit in zip(ordered, bits) if bit]
    return realize_subset(group, ordered, P, n)


def answer_pattern(Q: Sequence[int], instance: TsumInstance) -> Pattern:
    sums = sumset(instance)
    return tuple(int(q in sums) for q in sorted(Q))


def _check_cover(Q: Sequence[int], realizations: Sequence[SubsetRealization]) -> None:
    labels = {frozenset(r.P) for r in realizations}
    expected = {frozenset(P) for P in subsets(Q)}
    if labels != expected or len(realizations) != len(expected):
        raise IncompleteCover(
            "realizations must cover every subset of Q exactly once",
            found=len(labels),
            expected=len(expected),
        )


def joint_law(Q: Sequence[int], realizations: Sequence[SubsetRealization]) -> Dict[Pattern, Fraction]:
    """Exact law of the indicator vector under the uniform choice of realization"""
    counts = Counter(answer_pattern(Q, r.instance) for r in realizations)
    total = len(realizations)
    return {pattern: Fraction(count, total) for pattern, count in counts.items()}


def entropy_audit(Q: Sequence[int], realizations: Sequence[SubsetRealization]) -> EntropyReport:
    _check_cover(Q, realizations)
    law = joint_law(Q, realizations)
    entropy = -sum(float(p) * log2(float(p)) for p in law.values())
    size = len(set(Q))
    flagged = [
        ",".join(str(p) for p in r.P) or "{}"
        for r in realizations
        if answer_pattern(Q, r.instance) != tuple(int(q in set(r.P)) for q in sorted(Q))
    ]
    full = len(law) == 1 << size and all(p == Fraction(1, 1 << size) for p in law.values())
    if flagged:
        logger.warning("Realizations do not match their subsets", count=len(flagged))
    return EntropyReport(
        schema_version=get_settings().schema_version,
        q_size=size,
        realizations=len(realizations),
        entropy_bits=entropy,
        full_entropy=full,
        flagged=flagged,
    )


def is_fully_independent(Q: Sequence[int], realizations: Sequence[SubsetRealization]) -> IndependenceReport:
    """Compare the joint law with the product of its marginals, exactly"""
    law = joint_law(Q, realizations)
    size = len(set(Q))
    marginals = [
        sum((p for pattern, p in law.items() if pattern[i]), Fraction(0))
        for i in range(size)
    ]
    independent = True
    uniform = True
    for pattern in cartesian((0, 1), repeat=size):
        expected = Fraction(1)
        for bit, marginal in zip(pattern, marginals):
            expected *= marginal if bit else 1 - marginal
        observed = law.get(pattern, Fraction(0))
        independent = independent and observed == expected
        uniform = uniform and observed == Fraction(1, 1 << size)
    return IndependenceReport(
        schema_version=get_settings().schema_version,
        q_size=size,
        realizations=len(realizations),
        marginals=[str(m) for m in marginals],
        uniform=uniform,
        independent=independent,
    )
