"""
Hellman-chain solution

Inverts f(x) = A1[x // n] + A2[x % n] on the pair domain [n^2] with a single
Hellman table, then falls back to reading both sets so answers stay exact.

Memory layout: A1 (n cells), A2 (n cells), sorted chain entries end*n^2+start.
"""

from typing import Optional, Tuple

from ...config import get_settings
from ...models.cellprobe import Memory
from ...models.instance import SumsetAnswer, TsumInstance
from ..cellprobe import ProbeHandle
from ..groups import AnyGroup, adder, bit_width, subtractor
from ..inversion import chain_salt, endpoint_words, find_endpoint_run, hellman_build, lookup_probes
from ..tsum import NO_WITNESS
from .base import CellProbeSolution, resolve_word_bits


class _PairSum:
    def __init__(self, instance: TsumInstance):
        self._first = instance.A1
        self._second = instance.A2
        self._n = instance.n
        self._plus = adder(instance.group)
        self.N = instance.n * instance.n
        self.M = instance.group.order

    def __call__(self, x: int) -> int:
        i, j = divmod(x, self._n)
        return self._plus(self._first[i], self._second[j])


class HellmanTsumSolution(CellProbeSolution):

    name = "hellman"
    adaptive = True

    def __init__(
        self,
        group: AnyGroup,
        n: int,
        w: Optional[int] = None,
        m: Optional[int] = None,
        t: Optional[int] = None,
        seed: int = 0,
    ):
        settings = get_settings()
        domain = n * n
        needed = max(bit_width(group), (domain * domain - 1).bit_length() if domain > 1 else 1)
        super().__init__(group, n, resolve_word_bits(w, needed))
        self.domain = domain
        self.t = t or settings.hellman_chain_length
        self.m = min(m or settings.hellman_chains, domain)
        self.seed = seed
        self.salt = chain_salt(domain, seed) if domain else 0
        self._plus = adder(group)
        self._sub = subtractor(group)

    @property
    def S(self) -> int:
        return max(1, 2 * self.n + self.m)

    @property
    def T(self) -> int:
        if not self.n:
            return 0
        advice = self.t * (lookup_probes(self.m) + 1) + self.m
        evaluations = (self.t - 1) + self.m * self.t
        return advice + 2 * evaluations + 2 * self.n

    def preprocess(self, instance: TsumInstance) -> Memory:
        self.check_instance(instance)
        words = list(instance.A1) + list(instance.A2)
        if self.domain:
            table = hellman_build(_PairSum(instance), self.m, self.t, self.seed)
            words.extend(endpoint_words(table))
        return Memory.from_words(words or [0], self.w)

    def _evaluate(self, x: int, handle: ProbeHandle) -> Tuple[int, int, int]:
        i, j = divmod(x, self.n)
        a1 = handle.read(i)
        a2 = handle.read(self.n + j)
        return self._plus(a1, a2), a1, a2

    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        n = self.n
        if not n:
            return NO_WITNESS
        base = 2 * n
        walked = set()
        p = (z + self.salt) % self.domain
        for step in range(self.t):
            if p not in walked:
                starts = find_endpoint_run(handle.read, base, self.m, p, self.domain)
                if starts:
                    walked.add(p)
                for start in starts:
                    x = start % self.domain
                    for _ in range(self.t):
                        value, a1, a2 = self._evaluate(x, handle)
                        if value == z:
                            return SumsetAnswer(exists=True, witness=(a1, a2))
                        x = (value + self.salt) % self.domain
            if step < self.t - 1:
                value, _, _ = self._evaluate(p, handle)
                p = (value + self.salt) % self.domain
        # chains missed z: exact answer from the stored sets
        words = [handle.read(i) for i in range(base)]
        second = set(words[n:])
        for a1 in words[:n]:
            a2 = self._sub(z, a1)
            if a2 in second:
                return SumsetAnswer(exists=True, witness=(a1, a2))
        return NO_WITNESS


def build_hellman_solution(
    instance: TsumInstance,
    w: Optional[int] = None,
    m: Optional[int] = None,
    t: Optional[int] = None,
    seed: int = 0,
) -> HellmanTsumSolution:
    return HellmanTsumSolution(instance.group, instance.n, w=w, m=m, t=t, seed=seed)
