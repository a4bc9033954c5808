"""
Cell-probe execution: audited memory access, non-adaptivity checks and the
cell-sampling count
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..exceptions import InvalidParameters, OutOfBoundsProbe, ProbeBudgetExceeded
from ..models.cellprobe import Memory, ProbeTranscript
from ..models.instance import SumsetAnswer
from ..monitoring.metrics import MetricsCollector
from .groups import AnyGroup, random_below, validate

if TYPE_CHECKING:
    from .solutions.base import CellProbeSolution

logger = structlog.get_logger()


class ProbeHandle:
    """The only way a query may read memory; every read is logged"""

    def __init__(self, memory: Memory, budget: int, solution: str = ""):
        self._memory = memory
        self._budget = budget
        self._solution = solution
        self._probes: List[Tuple[int, int]] = []

    def read(self, index: int) -> int:
        if not 0 <= index < self._memory.S:
            raise OutOfBoundsProbe("probe outside memory", cell=index, S=self._memory.S, solution=self._solution)
        if len(self._probes) >= self._budget:
            raise ProbeBudgetExceeded("query exceeded its probe budget", T=self._budget, solution=self._solution)
        word = self._memory.cells[index]
        self._probes.append((index, word))
        return word

    @property
    def probes(self) -> List[Tuple[int, int]]:
        return list(self._probes)

    @property
    def addresses(self) -> List[int]:
        return [cell for cell, _ in self._probes]

    @property
    def count(self) -> int:
        return len(self._probes)

    @property
    def remaining(self) -> int:
        return self._budget - len(self._probes)


def run_query(solution: "CellProbeSolution", memory: Memory, z: int) -> Tuple[SumsetAnswer, ProbeTranscript]:
    """Answer z with full probe accounting"""
    validate(solution.group, z)
    if memory.S != solution.S or memory.w != solution.w:
        raise InvalidParameters(
            "memory shape does not match solution",
            solution=solution.name,
            S=memory.S,
            w=memory.w,
        )
    handle = ProbeHandle(memory, solution.T, solution.name)
    answer = solution.query(z, handle)
    transcript = ProbeTranscript(probes=handle.probes, adaptive=solution.adaptive, budget=solution.T)
    MetricsCollector.record_query(solution.name, len(transcript))
    return answer, transcript


def random_memory(rng: np.random.Generator, S: int, w: int) -> Memory:
    bound = 1 << w
    return Memory.from_words([random_below(rng, bound) for _ in range(S)], w)


def _address_trace(solution: "CellProbeSolution", memory: Memory, z: int) -> List[int]:
    handle = ProbeHandle(memory, solution.T, solution.name)
    try:
        solution.query(z, handle)
    except Exception as e:
        # random contents need not decode to anything meaningful
        logger.debug("Query aborted on random memory", solution=solution.name, z=z, error=str(e))
    return handle.addresses


def verify_nonadaptive(
    solution: "CellProbeSolution",
    group: AnyGroup,
    sample_queries: Iterable[int],
    seed: int = 0,
) -> bool:
    """True iff every sampled query probes the same addresses under two random memories"""
    if solution.T == 0:
        return True
    rng = np.random.default_rng(seed)
    memories = [random_memory(rng, solution.S, solution.w) for _ in range(2)]
    for z in sample_queries:
        validate(group, z)
        first, second = (_address_trace(solution, memory, z) for memory in memories)
        if first != second:
            logger.info("Adaptive probe schedule detected", solution=solution.name, z=z)
            return False
    return True


@dataclass(frozen=True)
class CellSamplingCount:
    """Expected number of queries answerable from a uniform Δ-subset of cells"""

    exact: Fraction
    lower_bound: Fraction
    relaxed: Optional[Fraction]


def cell_sampling_count(group_order: int, S: int, T: int, delta: int) -> CellSamplingCount:
    if not 0 <= T <= delta <= S:
        raise InvalidParameters("need 0 <= T <= delta <= S", S=S, T=T, delta=delta)
    exact = Fraction(group_order * comb(S - T, delta - T), comb(S, delta))
    lower_bound = group_order * Fraction(delta - T + 1, S) ** T
    relaxed = group_order * Fraction(delta, 2 * S) ** T if 2 * T <= delta else None
    return CellSamplingCount(exact=exact, lower_bound=lower_bound, relaxed=relaxed)


def _masks(probe_sets: Sequence[FrozenSet[int]], S: int) -> List[int]:
    masks = []
    for cells in probe_sets:
        mask = 0
        for cell in cells:
            if not 0 <= cell < S:
                raise OutOfBoundsProbe("probe set cell outside memory", cell=cell, S=S)
            mask |= 1 << cell
        masks.append(mask)
    return masks


def _subset_counts(probe_sets: Sequence[FrozenSet[int]], S: int, delta: int) -> Iterable[Tuple[Tuple[int, ...], int]]:
    if not 0 <= delta <= S:
        raise InvalidParameters("need 0 <= delta <= S", S=S, delta=delta)
    masks = _masks(probe_sets, S)
    for subset in combinations(range(S), delta):
        chosen = 0
        for cell in subset:
            chosen |= 1 << cell
        outside = ~chosen
        yield subset, sum(1 for mask in masks if not mask & outside)


def cell_sampling_enumerate(probe_sets: Sequence[FrozenSet[int]], S: int, delta: int) -> Fraction:
    """Average number of queries whose probe set lies inside a Δ-subset, by enumeration"""
    total = sum(count for _, count in _subset_counts(probe_sets, S, delta))
    return Fraction(total, comb(S, delta))


def best_cell_subset(probe_sets: Sequence[FrozenSet[int]], S: int, delta: int) -> Tuple[Tuple[int, ...], int]:
    """The Δ-subset answering the most queries (first in lexicographic order on ties)"""
    best: Tuple[Tuple[int, ...], int] = ((), -1)
    for subset, count in _subset_counts(probe_sets, S, delta):
        if count > best[1]:
            best = (subset, count)
    return best


def default_sample_size(n: int, w: int) -> int:
    """Δ = n/(2w), at least one cell"""
    return max(1, n // (2 * w))
