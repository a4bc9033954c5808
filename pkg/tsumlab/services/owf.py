"""
The immunized function F'(x1, x2) = R(x1) + R(x2) over a random oracle R,
and a harness for preprocessing adversaries that try to invert it.

Inputs are unordered pairs x1 < x2 of [N], ranked in colex order so that
F' can be treated as a function on [N(N-1)/2]. Adversaries get S cells of
advice built with unrestricted access to R; online, every advice read goes
through a ProbeHandle and every R evaluation through a CountingOracle.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt, log2, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from ..config import get_settings
from ..exceptions import EqualHalves, InvalidParameters, OutOfDomain
from ..models.cellprobe import Memory
from ..models.group import CyclicGroup, XorGroup
from ..models.instance import TsumInstance
from ..models.reports import OwfExperimentReport
from ..monitoring.metrics import MetricsCollector
from ..monitoring.progress import track
from .cellprobe import ProbeHandle
from .groups import AnyGroup, adder, bit_width, product, random_element, subtractor, xor_group
from .inversion import (
    CountingOracle,
    advice_probe_budget,
    endpoint_words,
    find_endpoint_run,
    hellman_build,
    hellman_coverage,
    lookup_probes,
)
from .solutions.base import resolve_word_bits
from .solutions.registry import WITNESS_SOLUTIONS, PreparedSolution, prepare

logger = structlog.get_logger()

Pair = Tuple[int, int]

# 95% normal quantile for the Wilson interval
WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class RandomOracle:
    """R(0..N-1), uniform group elements drawn from a seed"""

    N: int
    group: AnyGroup
    table: Tuple[int, ...]
    seed: int

    @classmethod
    def sample(cls, N: int, group: AnyGroup, seed: int) -> "RandomOracle":
        if N < 2:
            raise InvalidParameters("oracle domain needs at least two points", N=N)
        rng = np.random.default_rng(seed)
        return cls(N=N, group=group, table=tuple(random_element(rng, group) for _ in range(N)), seed=seed)

    def __call__(self, x: int) -> int:
        if not 0 <= x < self.N:
            raise OutOfDomain("oracle input outside [N]", x=x, N=self.N)
        return self.table[x]


def immunized_eval(R, x1: int, x2: int) -> int:
    """R(x1) + R(x2) in R's group; R may be a RandomOracle or a counting wrapper around one"""
    if x1 == x2:
        raise EqualHalves("immunized function needs x1 != x2", x=x1)
    return adder(R.group)(R(x1), R(x2))


def pair_count(N: int) -> int:
    return N * (N - 1) // 2


def pair_rank(x1: int, x2: int) -> int:
    low, high = sorted((x1, x2))
    if low == high:
        raise EqualHalves("pair halves must differ", x=low)
    return high * (high - 1) // 2 + low


def pair_unrank(rank: int) -> Pair:
    high = (1 + isqrt(1 + 8 * rank)) // 2
    while high * (high - 1) // 2 > rank:
        high -= 1
    return rank - high * (high - 1) // 2, high


class _CountedOracle:
    """R with a group attribute, counting every evaluation"""

    def __init__(self, R: RandomOracle):
        self.group = R.group
        self.N = R.N
        self._counter = CountingOracle(R)

    def __call__(self, x: int) -> int:
        return self._counter(x)

    @property
    def calls(self) -> int:
        return self._counter.calls


class PairFunction:
    """F' as a function on pair ranks, for the inversion machinery"""

    def __init__(self, R):
        self.R = R
        self.N = pair_count(R.N)
        self.M = R.group.order

    def __call__(self, rank: int) -> int:
        x1, x2 = pair_unrank(rank)
        return immunized_eval(self.R, x1, x2)


def preimage_count(R: RandomOracle, y: int) -> int:
    """Number of unordered pairs x1 < x2 with F'(x1, x2) = y"""
    group = R.group
    if isinstance(group, (CyclicGroup, XorGroup)) and group.order < 2**62:
        values = np.asarray(R.table, dtype=np.int64)
        if isinstance(group, CyclicGroup):
            partners = (y - values) % group.order
        else:
            partners = np.bitwise_xor(values, y)
        ordered_values, counts = np.unique(values, return_counts=True)
        slots = np.searchsorted(ordered_values, partners)
        slots = np.minimum(slots, len(ordered_values) - 1)
        matched = np.where(ordered_values[slots] == partners, counts[slots], 0)
        ordered = int(matched.sum()) - int(np.count_nonzero(partners == values))
        return ordered // 2
    minus = subtractor(group)
    counts: Dict[int, int] = {}
    for value in R.table:
        counts[value] = counts.get(value, 0) + 1
    ordered = sum(counts.get(minus(y, value), 0) for value in R.table)
    ordered -= sum(1 for value in R.table if minus(y, value) == value)
    return ordered // 2


def trial_mass(R: RandomOracle, values) -> Fraction:
    """Probability that y = F'(uniform pair) lands in a set of values"""
    hits = sum(preimage_count(R, y) for y in values)
    return Fraction(hits, pair_count(R.N))


class PreprocessingAdversary(ABC):
    """Builds advice offline, then inverts y with audited advice and oracle access"""

    name: str = "adversary"
    # wrong answers from a guessing adversary are misses, not false inversions
    guesses: bool = False

    def __init__(self) -> None:
        self.memory: Optional[Memory] = None
        # probes made outside the advice handle during the last inversion
        self.extra_probes = 0

    @abstractmethod
    def build(self, R: RandomOracle) -> None:
        """Offline phase with unbounded access to R"""
        pass

    @abstractmethod
    def invert(self, y: int, advice: Optional[ProbeHandle], oracle) -> Optional[Pair]:
        """Online phase: a candidate pair or None"""
        pass

    @property
    def S(self) -> int:
        return self.memory.S if self.memory is not None else 0

    @property
    def w(self) -> int:
        return self.memory.w if self.memory is not None else 0

    @property
    @abstractmethod
    def T_advice(self) -> int:
        pass

    @property
    @abstractmethod
    def T_oracle(self) -> int:
        pass

    def exact_success(self, R: RandomOracle) -> Optional[Fraction]:
        """Success probability over the trial distribution, when computable"""
        return None


class NullAdversary(PreprocessingAdversary):
    """No advice, no queries: always guesses (0, 1)"""

    name = "null"
    guesses = True

    def build(self, R: RandomOracle) -> None:
        self.memory = None

    def invert(self, y: int, advice: Optional[ProbeHandle], oracle) -> Optional[Pair]:
        return 0, 1

    @property
    def T_advice(self) -> int:
        return 0

    @property
    def T_oracle(self) -> int:
        return 0

    def exact_success(self, R: RandomOracle) -> Optional[Fraction]:
        return trial_mass(R, [immunized_eval(R, 0, 1)])


class TableAdversary(PreprocessingAdversary):
    """One preimage per image value, sorted as y * D + rank"""

    name = "table"

    def __init__(self, w: Optional[int] = None):
        super().__init__()
        self._requested_w = w
        self.D = 0

    def build(self, R: RandomOracle) -> None:
        self.D = pair_count(R.N)
        f = PairFunction(R)
        first: Dict[int, int] = {}
        for rank in range(self.D):
            first.setdefault(f(rank), rank)
        words = sorted(y * self.D + rank for y, rank in first.items())
        w = resolve_word_bits(self._requested_w, max(1, (R.group.order * self.D - 1).bit_length()))
        self.memory = Memory.from_words(words, w)

    def invert(self, y: int, advice: Optional[ProbeHandle], oracle) -> Optional[Pair]:
        ranks = find_endpoint_run(advice.read, 0, self.S, y, self.D)
        return pair_unrank(ranks[0]) if ranks else None

    @property
    def T_advice(self) -> int:
        return lookup_probes(self.S) + 2

    @property
    def T_oracle(self) -> int:
        return 0

    def exact_success(self, R: RandomOracle) -> Optional[Fraction]:
        return Fraction(1)


class HellmanAdversary(PreprocessingAdversary):
    """
    Hellman chains over pair ranks. Cell 0 holds the reduction salt, the
    rest hold sorted end * D + start entries.
    """

    name = "hellman"

    def __init__(self, m: Optional[int] = None, t: Optional[int] = None, seed: int = 0, w: Optional[int] = None):
        super().__init__()
        settings = get_settings()
        self.m = m or settings.hellman_chains
        self.t = t or settings.hellman_chain_length
        self.seed = seed
        self._requested_w = w
        self.table = None
        self.D = 0

    def build(self, R: RandomOracle) -> None:
        f = PairFunction(R)
        self.D = f.N
        self.table = hellman_build(f, self.m, self.t, self.seed)
        words = [self.table.salt] + endpoint_words(self.table)
        w = resolve_word_bits(self._requested_w, max(1, (self.D * self.D - 1).bit_length()))
        self.memory = Memory.from_words(words, w)

    @property
    def entries(self) -> int:
        return self.S - 1

    def invert(self, y: int, advice: Optional[ProbeHandle], oracle) -> Optional[Pair]:
        f = PairFunction(oracle)
        salt = advice.read(0)
        walked = set()
        p = (y + salt) % self.D
        for step in range(self.t):
            if p not in walked:
                walked.add(p)
                for start in find_endpoint_run(advice.read, 1, self.entries, p, self.D):
                    x = start
                    for _ in range(self.t):
                        value = f(x)
                        if value == y:
                            return pair_unrank(x)
                        x = (value + salt) % self.D
            if step < self.t - 1:
                p = (f(p) + salt) % self.D
        return None

    @property
    def T_advice(self) -> int:
        return 1 + advice_probe_budget(self.entries, self.t)

    @property
    def T_oracle(self) -> int:
        return 2 * self.t * (1 + self.entries)

    def exact_success(self, R: RandomOracle) -> Optional[Fraction]:
        coverage = hellman_coverage(self.table, PairFunction(R), exhaustive=False)
        return trial_mass(R, coverage.values)


class TsumAdversary(PreprocessingAdversary):
    """
    Inversion through 3SUM-Indexing data structures.

    The primary structure holds A1 = A2 = image of R. Its witness (a, a) is only
    usable when a has two preimages; otherwise the adversary falls back to one
    structure per input bit b, with A1 = R({x : bit b of x is 0}) and
    A2 = R({x : bit b of x is 1}). Any two distinct inputs differ in some bit,
    so every y with a preimage has a witness in some fallback structure, and
    every fallback witness comes from two distinct inputs. Fallback sets are
    padded to equal size with elements tagged 1 in Xor(1) x G, so padded sums
    never equal a query.

    The preimage index stores key * N + x, sorted, where key = value for the
    primary structure (up to two preimages) and key = (1 + 2b + side) * |G| + value
    for the fallbacks (one preimage each).
    """

    name = "tsum"

    def __init__(self, solution: str = "sumset", w: Optional[int] = None, seed: int = 0):
        super().__init__()
        self.solution_name = solution
        self._requested_w = w
        self.seed = seed
        self.ds: Optional[PreparedSolution] = None
        self.fallbacks: List[PreparedSolution] = []
        self.instance: Optional[TsumInstance] = None
        self.N = 0
        self.order = 0

    def build(self, R: RandomOracle) -> None:
        self.N = R.N
        self.order = R.group.order
        image = sorted(set(R.table))
        self.instance = TsumInstance(group=R.group, A1=image, A2=image)
        self.ds = prepare(self.solution_name, self.instance, w=self._requested_w, seed=self.seed)
        self.fallbacks = [
            prepare(self.solution_name, instance, w=self._requested_w, seed=self.seed)
            for instance in split_instances(R)
        ]
        index: Dict[int, List[int]] = {}
        for x, value in enumerate(R.table):
            found = index.setdefault(value, [])
            if len(found) < 2:
                found.append(x)
            for b in range(len(self.fallbacks)):
                index.setdefault(self._key(b, x >> b & 1, value), [x])
        words = sorted(key * R.N + x for key, xs in index.items() for x in xs)
        needed = ((1 + 2 * len(self.fallbacks)) * self.order * R.N - 1).bit_length()
        w = max(self.ds.solution.w, resolve_word_bits(self._requested_w, needed))
        self.memory = Memory.from_words(words, w)

    def _key(self, b: int, side: int, value: int) -> int:
        return (1 + 2 * b + side) * self.order + value

    @property
    def S(self) -> int:
        if self.ds is None:
            return 0
        return self.ds.solution.S + sum(fb.solution.S for fb in self.fallbacks) + self.memory.S

    def _lookup(self, advice: ProbeHandle, key: int) -> List[int]:
        return find_endpoint_run(advice.read, 0, self.memory.S, key, self.N)

    def invert(self, y: int, advice: Optional[ProbeHandle], oracle) -> Optional[Pair]:
        answer, transcript = self.ds.query(y)
        self.extra_probes = len(transcript)
        if not answer.exists or answer.witness is None:
            return None
        a1, a2 = answer.witness
        first = self._lookup(advice, a1)
        if a1 != a2:
            second = self._lookup(advice, a2)
            if not first or not second:
                return None
            return first[0], second[0]
        if len(first) >= 2:
            return first[0], first[1]
        for b, fallback in enumerate(self.fallbacks):
            answer, transcript = fallback.query(y)
            self.extra_probes += len(transcript)
            if not answer.exists or answer.witness is None:
                continue
            v1, v2 = answer.witness
            zero = self._lookup(advice, self._key(b, 0, v1))
            one = self._lookup(advice, self._key(b, 1, v2))
            if zero and one:
                return min(zero[0], one[0]), max(zero[0], one[0])
        return None

    @property
    def T_advice(self) -> int:
        structures = self.ds.solution.T + sum(fb.solution.T for fb in self.fallbacks)
        return structures + 3 * (lookup_probes(self.memory.S) + 3)

    @property
    def T_oracle(self) -> int:
        return 0

    def exact_success(self, R: RandomOracle) -> Optional[Fraction]:
        if self.solution_name not in WITNESS_SOLUTIONS:
            return Fraction(0)
        # every trial value has a preimage, and a witness solution always finds one
        return Fraction(1)


def split_instances(R: RandomOracle) -> List[TsumInstance]:
    """One instance per input bit: images of inputs with the bit clear against images with it set"""
    group = product(xor_group(1), R.group)
    tag = R.group.order
    instances = []
    for b in range((R.N - 1).bit_length()):
        clear = sorted({value for x, value in enumerate(R.table) if not x >> b & 1})
        marked = sorted({value for x, value in enumerate(R.table) if x >> b & 1})
        size = max(len(clear), len(marked))
        clear += [tag + k for k in range(size - len(clear))]
        marked += [tag + k for k in range(size - len(marked))]
        instances.append(TsumInstance(group=group, A1=clear, A2=marked))
    return instances


def invert_via_tsum(R: RandomOracle, y: int, solution: str = "sumset", w: Optional[int] = None) -> Optional[Pair]:
    """Build a TsumAdversary for R and run one inversion"""
    adversary = TsumAdversary(solution=solution, w=w)
    adversary.build(R)
    handle = ProbeHandle(adversary.memory, adversary.T_advice, adversary.name)
    return adversary.invert(y, handle, _CountedOracle(R))


ADVERSARIES = ("null", "table", "hellman", "tsum")


def build_adversary(
    name: str,
    seed: int = 0,
    w: Optional[int] = None,
    m: Optional[int] = None,
    t: Optional[int] = None,
    solution: str = "sumset",
) -> PreprocessingAdversary:
    if name == "null":
        return NullAdversary()
    if name == "table":
        return TableAdversary(w=w)
    if name == "hellman":
        return HellmanAdversary(m=m, t=t, seed=seed, w=w)
    if name == "tsum":
        return TsumAdversary(solution=solution, w=w, seed=seed)
    raise InvalidParameters(f"unknown adversary '{name}'", available=list(ADVERSARIES))


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    p = successes / trials
    denominator = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denominator
    half = z / denominator * sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def reference_lines(S: int, T: int, D: int) -> Tuple[float, float]:
    """T(S + n)/D with n = ceil(log2 D), and S^2 T / D^2, both capped at 1"""
    n = ceil(log2(D)) if D > 1 else 1
    dtt = min(1.0, T * (S + n) / D)
    hellman = min(1.0, S * S * T / (D * D))
    return dtt, hellman


def trial_ranks(D: int, trials: int, seed: int) -> List[int]:
    """Uniform pair ranks, drawn from a stream independent of the oracle's"""
    rng = np.random.default_rng([seed, 1])
    return [int(r) for r in rng.integers(0, D, size=trials)]


def run_experiment(
    adversary: PreprocessingAdversary,
    N: int,
    group: AnyGroup,
    trials: int,
    seed: int,
    exact: bool = True,
) -> OwfExperimentReport:
    if trials < 1:
        raise InvalidParameters("need at least one trial", trials=trials)
    R = RandomOracle.sample(N, group, seed)
    adversary.build(R)
    D = pair_count(N)
    successes = 0
    false_inversions = 0
    advice_probes = 0
    oracle_calls = 0
    for rank in track(trial_ranks(D, trials, seed), desc=f"owf {adversary.name}", total=trials):
        y = PairFunction(R)(rank)
        oracle = _CountedOracle(R)
        handle = ProbeHandle(adversary.memory, adversary.T_advice, adversary.name) if adversary.memory else None
        adversary.extra_probes = 0
        candidate = adversary.invert(y, handle, oracle)
        advice_probes += (handle.count if handle else 0) + adversary.extra_probes
        oracle_calls += oracle.calls
        success = False
        if candidate is not None:
            x1, x2 = candidate
            success = x1 != x2 and 0 <= min(x1, x2) and max(x1, x2) < N and immunized_eval(R, x1, x2) == y
            false_inversions += not (success or adversary.guesses)
        successes += success
        MetricsCollector.record_inversion(adversary.name, success)
        MetricsCollector.record_oracle_calls(adversary.name, oracle.calls)
    if false_inversions:
        logger.warning("Adversary claimed wrong preimages", adversary=adversary.name, count=false_inversions)
    low, high = wilson_interval(successes, trials)
    T = adversary.T_advice + adversary.T_oracle
    dtt, hellman = reference_lines(adversary.S, T, D)
    exact_value = adversary.exact_success(R) if exact else None
    report = OwfExperimentReport(
        schema_version=get_settings().schema_version,
        adversary=adversary.name,
        N=N,
        group=group.label(),
        seed=seed,
        S=adversary.S,
        w=adversary.w or bit_width(group),
        T=T,
        T_advice=adversary.T_advice,
        T_oracle=adversary.T_oracle,
        trials=trials,
        successes=successes,
        success=successes / trials,
        success_low=low,
        success_high=high,
        exact_success=str(exact_value) if exact_value is not None else None,
        dtt_line=dtt,
        hellman_line=hellman,
        mean_advice_probes=advice_probes / trials,
        mean_oracle_calls=oracle_calls / trials,
        false_inversions=false_inversions,
    )
    logger.info(
        "OWF experiment finished",
        adversary=adversary.name,
        N=N,
        success=report.success,
        exact=report.exact_success,
    )
    return report
