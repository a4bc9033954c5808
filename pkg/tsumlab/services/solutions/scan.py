"""
Linear-space scan solutions

Memory holds A1 in cells 0..n-1 and A2 in cells n..2n-1 (one id per cell).
"""

from math import ceil, log2
from typing import Optional

from ...models.cellprobe import Memory
from ...models.instance import SumsetAnswer, TsumInstance
from ..cellprobe import ProbeHandle
from ..groups import AnyGroup, bit_width, subtractor
from ..tsum import NO_WITNESS
from .base import CellProbeSolution, resolve_word_bits


class ScanSolution(CellProbeSolution):
    """Read every a1, binary-search z - a1 among the sorted A2 cells"""

    name = "scan"
    adaptive = True

    def __init__(self, group: AnyGroup, n: int, w: Optional[int] = None):
        super().__init__(group, n, resolve_word_bits(w, bit_width(group)))
        self._sub = subtractor(group)

    @property
    def S(self) -> int:
        return max(1, 2 * self.n)

    @property
    def T(self) -> int:
        return self.n + self.n * ceil(log2(self.n + 1))

    def preprocess(self, instance: TsumInstance) -> Memory:
        self.check_instance(instance)
        words = list(instance.A1) + list(instance.A2)
        return Memory.from_words(words or [0], self.w)

    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        n = self.n
        for i in range(n):
            a1 = handle.read(i)
            target = self._sub(z, a1)
            lo, hi = 0, n
            while lo < hi:
                mid = (lo + hi) // 2
                value = handle.read(n + mid)
                if value == target:
                    return SumsetAnswer(exists=True, witness=(a1, target))
                if value < target:
                    lo = mid + 1
                else:
                    hi = mid
        return NO_WITNESS


class FixedScanSolution(ScanSolution):
    """Read all 2n cells in a fixed order, then decide"""

    name = "scan-fixed"
    adaptive = False

    @property
    def T(self) -> int:
        return 2 * self.n

    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        words = [handle.read(i) for i in range(2 * self.n)]
        first, second = words[: self.n], set(words[self.n :])
        for a1 in first:
            a2 = self._sub(z, a1)
            if a2 in second:
                return SumsetAnswer(exists=True, witness=(a1, a2))
        return NO_WITNESS


def build_scan_solution(instance: TsumInstance, w: Optional[int] = None, fixed: bool = False) -> ScanSolution:
    factory = FixedScanSolution if fixed else ScanSolution
    return factory(instance.group, instance.n, w=w)
