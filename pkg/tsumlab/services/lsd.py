"""
Reduction from blocked lopsided set disjointness to 3SUM-Indexing

Blocks are grouped ell at a time. Values are written in base 2B+1 (or in
fixed-width bit fields for the XOR group):

    group index i | guard digit (position ell) | ell low digits

A1 holds one element per Bob pair, with digit b+1 at the pair's offset in
its group. A2 holds every low-digit vector with exactly one zero and all
other digits in [1, B]. Alice's query for group i has low digits b_j + 1.
Padding elements carry a non-zero guard digit so no sum involving them can
equal a query.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product as cartesian
from math import ceil, comb, log2
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import InvalidParameters, ParameterOverflow
from ..models.instance import LsdInstance, SumsetAnswer, TsumInstance
from ..models.reports import CommRound, CommStats, LsdDecision
from ..monitoring.metrics import MetricsCollector
from .groups import AnyGroup, cyclic, xor_group
from .solutions.registry import PreparedSolution
from .tsum import brute_force_query

logger = structlog.get_logger()


class LsdMode(str, Enum):
    CYCLIC = "cyclic"
    XOR = "xor"


@dataclass(frozen=True)
class LsdLayout:
    """Positional layout of encoded values"""

    B: int
    ell: int
    groups: int
    mode: LsdMode = LsdMode.CYCLIC

    @property
    def radix(self) -> int:
        return 2 * self.B + 1

    @property
    def digit_bits(self) -> int:
        return (self.radix - 1).bit_length()

    def _weight(self, position: int) -> int:
        if self.mode == LsdMode.XOR:
            return 1 << (position * self.digit_bits)
        return self.radix**position

    def compose(self, group_index: int, guard: int, low: Sequence[int]) -> int:
        value = group_index * self._weight(self.ell + 1) + guard * self._weight(self.ell)
        for position, digit in enumerate(low):
            value += digit * self._weight(position)
        return value

    def group_of(self, value: int) -> int:
        return value // self._weight(self.ell + 1)

    @property
    def group(self) -> AnyGroup:
        if self.mode == LsdMode.XOR:
            high_bits = max(1, (self.groups - 1).bit_length())
            return xor_group((self.ell + 1) * self.digit_bits + high_bits)
        return cyclic(self.groups * self.radix ** (self.ell + 2))


@dataclass(frozen=True)
class LsdEncoding:
    """Bob's raw sets before padding"""

    layout: LsdLayout
    A1: Tuple[int, ...]
    A2: Tuple[int, ...]

    @property
    def group(self) -> AnyGroup:
        return self.layout.group


def pad_instance(instance: LsdInstance, ell: int) -> LsdInstance:
    """Append blocks with Alice value 0 and no Bob pairs until ell divides N"""
    if ell < 1:
        raise InvalidParameters("ell must be positive", ell=ell)
    padded = ceil(instance.N / ell) * ell
    if padded == instance.N:
        return instance
    return LsdInstance(N=padded, B=instance.B, X=instance.X, Y=list(instance.Y) + [0] * (padded - instance.N))


def layout_for(instance: LsdInstance, ell: int, mode: LsdMode = LsdMode.CYCLIC) -> LsdLayout:
    padded = pad_instance(instance, ell)
    layout = LsdLayout(B=padded.B, ell=ell, groups=padded.N // ell, mode=mode)
    cap = get_settings().max_group_order
    if layout.group.order > cap:
        raise ParameterOverflow("LSD group exceeds cap", order=layout.group.order, cap=cap)
    return layout


def encode_bob(instance: LsdInstance, ell: int, mode: LsdMode = LsdMode.CYCLIC) -> LsdEncoding:
    layout = layout_for(instance, ell, mode)
    first = []
    for block, b in instance.X:
        group_index, offset = divmod(block, ell)
        low = [0] * ell
        low[offset] = b + 1
        first.append(layout.compose(group_index, 0, low))
    second = []
    for zero_at in range(ell):
        ranges = [range(1, instance.B + 1)] * (ell - 1)
        for values in cartesian(*ranges):
            low = list(values[:zero_at]) + [0] + list(values[zero_at:])
            second.append(layout.compose(0, 0, low))
    return LsdEncoding(layout=layout, A1=tuple(sorted(set(first))), A2=tuple(sorted(set(second))))


def _dummies(layout: LsdLayout, guard: int) -> Iterator[int]:
    for group_index in range(layout.groups):
        for low in cartesian(range(layout.B + 1), repeat=layout.ell):
            yield layout.compose(group_index, guard, list(reversed(low)))


def bob_instance(encoding: LsdEncoding) -> TsumInstance:
    """Pad A1 and A2 to equal size with sum-safe dummies"""
    layout = encoding.layout
    size = max(len(encoding.A1), len(encoding.A2))
    # guard digits: 1 and 1 (cyclic, sums 1 or 2), 1 and 2 (XOR, sums 1, 2 or 3)
    second_guard = 2 if layout.mode == LsdMode.XOR else 1
    padded = []
    for values, guard in ((list(encoding.A1), 1), (list(encoding.A2), second_guard)):
        fresh = _dummies(layout, guard)
        while len(values) < size:
            values.append(next(fresh))
        padded.append(sorted(values))
    return TsumInstance(group=layout.group, A1=padded[0], A2=padded[1])


def encode_alice(instance: LsdInstance, ell: int, mode: LsdMode = LsdMode.CYCLIC) -> List[int]:
    layout = layout_for(instance, ell, mode)
    padded = pad_instance(instance, ell)
    queries = []
    for group_index in range(layout.groups):
        block_values = padded.Y[group_index * ell : (group_index + 1) * ell]
        queries.append(layout.compose(group_index, 0, [b + 1 for b in block_values]))
    return queries


def direct_disjoint(instance: LsdInstance) -> bool:
    chosen = set(enumerate(instance.Y))
    return not any(tuple(pair) in chosen for pair in instance.X)


def _answers(
    tsum_instance: TsumInstance,
    queries: Sequence[int],
    ds: Optional[PreparedSolution],
) -> List[SumsetAnswer]:
    if ds is None:
        return [brute_force_query(tsum_instance, z) for z in queries]
    return [ds.query(z)[0] for z in queries]


def decide_disjointness(
    instance: LsdInstance,
    ell: int,
    ds: Optional[PreparedSolution] = None,
    mode: LsdMode = LsdMode.CYCLIC,
) -> LsdDecision:
    """X and Y are disjoint iff every group query answers no witness"""
    encoding = encode_bob(instance, ell, mode)
    tsum_instance = bob_instance(encoding)
    queries = encode_alice(instance, ell, mode)
    answers = _answers(tsum_instance, queries, ds)
    bad_groups = []
    for group_index, answer in enumerate(answers):
        if answer.witness is not None and encoding.layout.group_of(answer.witness[0]) != group_index:
            bad_groups.append(group_index)
    decision = LsdDecision(
        schema_version=get_settings().schema_version,
        disjoint=not any(answer.exists for answer in answers),
        direct_disjoint=direct_disjoint(instance),
        answers=[answer.exists for answer in answers],
        witness_group_violations=bad_groups,
    )
    if not decision.consistent:
        MetricsCollector.record_violations("lsd", 1)
        logger.warning("Disjointness verdict disagrees", N=instance.N, B=instance.B, ell=ell)
    return decision


def simulate_protocol(
    instance: LsdInstance,
    ell: int,
    ds: PreparedSolution,
    mode: LsdMode = LsdMode.CYCLIC,
) -> CommStats:
    """
    Alice runs all group queries in lockstep. In round r she names the set
    of cells requested at step r (ceil(log2 C(S, k)) bits) and Bob answers
    with their contents (k * w bits).
    """
    solution = ds.solution
    queries = encode_alice(instance, ell, mode)
    transcripts = [ds.query(z) for z in queries]
    S, w = solution.S, solution.w
    stats = CommStats(
        schema_version=get_settings().schema_version,
        solution=solution.name,
        N=instance.N,
        B=instance.B,
        ell=ell,
        queries=len(queries),
        S=S,
        w=w,
        rounds=solution.T,
    )
    longest = max((len(transcript) for _, transcript in transcripts), default=0)
    for step in range(longest):
        cells = {transcript.addresses[step] for _, transcript in transcripts if len(transcript) > step}
        alice = ceil(log2(comb(S, len(cells)))) if cells else 0
        bob = len(cells) * w
        stats.alice_bits += alice
        stats.bob_bits += bob
        stats.per_round.append(CommRound(step=step, cells=len(cells), alice_bits=alice, bob_bits=bob))
    stats.verdict_disjoint = not any(answer.exists for answer, _ in transcripts)
    stats.consistent = stats.verdict_disjoint == direct_disjoint(instance)
    groups = len(queries)
    if groups and S * ell > instance.N:
        stats.reference_alice_bits = groups * solution.T * log2(S * ell / instance.N)
    logger.debug(
        "Protocol simulated",
        solution=solution.name,
        rounds=stats.rounds,
        alice_bits=stats.alice_bits,
        bob_bits=stats.bob_bits,
    )
    return stats


def auto_parameters(w: int, n: int, epsilon: Optional[float] = None) -> Tuple[int, int]:
    """B = w^4 and ell = max(1, floor(eps log2 n / log2 w))"""
    if w < 2 or n < 1:
        raise InvalidParameters("need w >= 2 and n >= 1", w=w, n=n)
    eps = get_settings().lsd_epsilon if epsilon is None else epsilon
    ell = max(1, int(eps * log2(n) / log2(w)))
    return w**4, ell


def random_lsd_instance(N: int, B: int, pairs: int, rng: np.random.Generator) -> LsdInstance:
    """Alice values uniform in [B]; Bob holds `pairs` uniform (block, value) pairs"""
    Y = [int(b) for b in rng.integers(0, B, size=N)]
    X = [(int(i), int(b)) for i, b in zip(rng.integers(0, N, size=pairs), rng.integers(0, B, size=pairs))]
    return LsdInstance(N=N, B=B, X=X, Y=Y)
