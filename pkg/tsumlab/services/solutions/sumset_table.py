"""
Sumset bit-vector solution
"""

from math import ceil
from typing import List, Optional

from ...config import get_settings
from ...models.cellprobe import Memory
from ...models.instance import SumsetAnswer, TsumInstance
from ..cellprobe import ProbeHandle
from ..groups import AnyGroup, bit_width, check_cap, subtractor
from ..tsum import NO_WITNESS, sumset_witnesses
from .base import CellProbeSolution, resolve_word_bits


class SumsetTableSolution(CellProbeSolution):
    """
    Bit z of the table (little-endian within words) is set iff z is in the
    sumset. With ``witness`` enabled, cell D + z additionally stores the a1
    of the smallest witness and every query reads both cells.
    """

    adaptive = False

    def __init__(self, group: AnyGroup, n: int, w: Optional[int] = None, witness: bool = True):
        check_cap(group, get_settings().max_group_order)
        needed = bit_width(group) if witness else 1
        super().__init__(group, n, resolve_word_bits(w, needed))
        self.witness = witness
        self.name = "sumset" if witness else "sumset-decision"
        self.table_cells = ceil(group.order / self.w)
        self._sub = subtractor(group)

    @property
    def S(self) -> int:
        return self.table_cells + (self.group.order if self.witness else 0)

    @property
    def T(self) -> int:
        return 2 if self.witness else 1

    def preprocess(self, instance: TsumInstance) -> Memory:
        self.check_instance(instance)
        witnesses = sumset_witnesses(instance)
        words: List[int] = [0] * self.table_cells
        for z in witnesses:
            words[z // self.w] |= 1 << (z % self.w)
        if self.witness:
            index = [0] * self.group.order
            for z, (a1, _) in witnesses.items():
                index[z] = a1
            words.extend(index)
        return Memory.from_words(words, self.w)

    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        word = handle.read(z // self.w)
        present = (word >> (z % self.w)) & 1
        if not self.witness:
            return SumsetAnswer(exists=bool(present))
        a1 = handle.read(self.table_cells + z)
        if not present:
            return NO_WITNESS
        return SumsetAnswer(exists=True, witness=(a1, self._sub(z, a1)))


def build_sumset_table(instance: TsumInstance, w: Optional[int] = None, witness: bool = True) -> SumsetTableSolution:
    return SumsetTableSolution(instance.group, instance.n, w=w, witness=witness)
