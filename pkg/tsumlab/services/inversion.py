"""
Function inversion: full inverse tables and Hellman chain tables
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2
from typing import Callable, Dict, FrozenSet, List, Optional, Protocol, Tuple

import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import InvalidParameters, ParameterOverflow

logger = structlog.get_logger()


class FiniteFunction(Protocol):
    """A function on [N] with values in [M]"""

    N: int
    M: int

    def __call__(self, x: int) -> int:
        ...


@dataclass(frozen=True)
class FunctionTable:
    """f(0..N-1) stored explicitly"""

    values: Tuple[int, ...]
    M: int

    def __post_init__(self) -> None:
        if self.M < 1:
            raise InvalidParameters("codomain must be non-empty", M=self.M)
        if any(not 0 <= v < self.M for v in self.values):
            raise InvalidParameters("function value outside codomain", M=self.M)

    @property
    def N(self) -> int:
        return len(self.values)

    def __call__(self, x: int) -> int:
        return self.values[x]

    @classmethod
    def random(cls, N: int, M: int, seed: int) -> "FunctionTable":
        rng = np.random.default_rng(seed)
        return cls(values=tuple(int(v) for v in rng.integers(0, M, size=N)), M=M)

    @classmethod
    def identity(cls, N: int) -> "FunctionTable":
        return cls(values=tuple(range(N)), M=N)


class CountingOracle:
    """Wraps a function and counts evaluations"""

    def __init__(self, f: Callable[[int], int]):
        self._f = f
        self.calls = 0

    def __call__(self, x: int) -> int:
        self.calls += 1
        return self._f(x)


@dataclass(frozen=True)
class InverseIndex:
    """Smallest preimage of every value in the image"""

    first_preimage: Dict[int, int]
    M: int

    def invert(self, y: int) -> Optional[int]:
        return self.first_preimage.get(y)

    @property
    def image_size(self) -> int:
        return len(self.first_preimage)

    def success_probability(self) -> Fraction:
        """Success over uniform y in [M]"""
        return Fraction(self.image_size, self.M)


def build_full_inverse(f: FiniteFunction) -> InverseIndex:
    first: Dict[int, int] = {}
    for x in range(f.N):
        first.setdefault(f(x), x)
    return InverseIndex(first_preimage=first, M=f.M)


@dataclass(frozen=True)
class HellmanTable:
    """
    m chains of length t under x -> g(f(x)), g(y) = (y + salt) mod N.

    Chain starts are a prefix of one seeded permutation of [N], so tables
    built from one seed are nested in m; every start is kept per endpoint.
    """

    N: int
    m: int
    t: int
    salt: int
    seed: int
    endpoints: Dict[int, Tuple[int, ...]] = field(repr=False)

    def reduce(self, y: int) -> int:
        return (y + self.salt) % self.N

    @property
    def stored_cells(self) -> int:
        return self.m

    @property
    def oracle_budget(self) -> int:
        return self.t * (1 + self.m)

    def sorted_entries(self) -> List[Tuple[int, int]]:
        return sorted((end, start) for end, starts in self.endpoints.items() for start in starts)


def chain_salt(N: int, seed: int) -> int:
    return int(np.random.default_rng(seed).integers(0, N))


def chain_starts(N: int, m: int, seed: int) -> Tuple[int, List[int]]:
    """Salt and the first m chain starts for a seed"""
    rng = np.random.default_rng(seed)
    salt = int(rng.integers(0, N))
    order = rng.permutation(N) if N <= 2**22 else None
    if order is not None:
        return salt, [int(x) for x in order[:m]]
    starts: List[int] = []
    seen = set()
    while len(starts) < m:
        x = int(rng.integers(0, N))
        if x not in seen:
            seen.add(x)
            starts.append(x)
    return salt, starts


def hellman_build(f: FiniteFunction, m: int, t: int, seed: int) -> HellmanTable:
    N = f.N
    if m < 1 or t < 1:
        raise InvalidParameters("m and t must be positive", m=m, t=t)
    cap = get_settings().max_chain_work
    if m * t > cap:
        raise ParameterOverflow("chain work m*t exceeds cap", m=m, t=t, cap=cap)
    m = min(m, N)
    salt, starts = chain_starts(N, m, seed)
    endpoints: Dict[int, List[int]] = {}
    for start in starts:
        x = start
        for _ in range(t):
            x = (f(x) + salt) % N
        endpoints.setdefault(x, []).append(start)
    logger.debug("Hellman table built", N=N, m=m, t=t, endpoints=len(endpoints))
    return HellmanTable(
        N=N, m=m, t=t, salt=salt, seed=seed,
        endpoints={end: tuple(sorted(starts)) for end, starts in endpoints.items()},
    )


@dataclass
class InversionResult:
    x: Optional[int]
    oracle_calls: int
    lookups: int


def hellman_invert(table: HellmanTable, f_oracle: Callable[[int], int], y: int) -> InversionResult:
    """Walk y forward up to t steps; on an endpoint hit replay its chains"""
    oracle = CountingOracle(f_oracle)
    walked = set()
    lookups = 0
    p = table.reduce(y)
    for step in range(table.t):
        lookups += 1
        starts = table.endpoints.get(p)
        if starts and p not in walked:
            walked.add(p)
            for start in starts:
                x = start
                for _ in range(table.t):
                    value = oracle(x)
                    if value == y:
                        return InversionResult(x=x, oracle_calls=oracle.calls, lookups=lookups)
                    x = table.reduce(value)
        if step < table.t - 1:
            p = table.reduce(oracle(p))
    return InversionResult(x=None, oracle_calls=oracle.calls, lookups=lookups)


@dataclass(frozen=True)
class HellmanCoverage:
    """Values invertible by a table, with exact success probabilities"""

    values: FrozenSet[int]
    uniform_y: Fraction
    image_y: Optional[Fraction]


def covered_values(table: HellmanTable, f: Callable[[int], int]) -> FrozenSet[int]:
    """f-values at chain positions 0..t-1: exactly the y hellman_invert can invert"""
    covered = set()
    for starts in table.endpoints.values():
        for start in starts:
            x = start
            for _ in range(table.t):
                value = f(x)
                covered.add(value)
                x = table.reduce(value)
    return frozenset(covered)


def hellman_coverage(table: HellmanTable, f: FiniteFunction, exhaustive: bool = True) -> HellmanCoverage:
    values = covered_values(table, f)
    image_y = None
    if exhaustive:
        hits = sum(1 for x in range(f.N) if f(x) in values)
        image_y = Fraction(hits, f.N)
    return HellmanCoverage(values=values, uniform_y=Fraction(len(values), f.M), image_y=image_y)


def lookup_probes(m: int) -> int:
    """Probes for a lower-bound binary search over m sorted cells"""
    return ceil(log2(m + 1)) if m else 0


def find_endpoint_run(read: Callable[[int], int], base: int, count: int, key: int, width: int) -> List[int]:
    """
    Entries end * width + start are sorted in cells base..base+count-1.
    Returns the starts of every entry whose end equals key.
    """
    lo, hi = 0, count
    target = key * width
    while lo < hi:
        mid = (lo + hi) // 2
        if read(base + mid) < target:
            lo = mid + 1
        else:
            hi = mid
    starts = []
    while lo < count:
        end, start = divmod(read(base + lo), width)
        if end != key:
            break
        starts.append(start)
        lo += 1
    return starts


def endpoint_words(table: HellmanTable) -> List[int]:
    return [end * table.N + start for end, start in table.sorted_entries()]


def advice_probe_budget(m: int, t: int) -> int:
    """Binary search plus one terminating read per lookup, plus every matched entry once"""
    return t * (lookup_probes(m) + 1) + m

