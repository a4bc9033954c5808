"""
Base cell-probe solution
"""

from abc import ABC, abstractmethod
from typing import Optional

from ...config import get_settings
from ...exceptions import InvalidParameters, WordTooSmall
from ...models.cellprobe import Memory, SolutionInfo
from ...models.instance import SumsetAnswer, TsumInstance
from ..cellprobe import ProbeHandle
from ..groups import AnyGroup


def resolve_word_bits(requested: Optional[int], needed: int) -> int:
    """Pick w: the configured default widened to fit, or an explicit value that must fit"""
    if requested is None:
        return max(get_settings().word_bits, needed)
    if requested < needed:
        raise WordTooSmall("word size too small for stored values", w=requested, needed=needed)
    return requested


class CellProbeSolution(ABC):
    """Base class for 3SUM-Indexing data structures in the cell-probe model"""

    name: str = "solution"
    adaptive: bool = False

    def __init__(self, group: AnyGroup, n: int, w: int):
        if n < 0:
            raise InvalidParameters("n must be non-negative", n=n)
        self.group = group
        self.n = n
        self.w = w

    @property
    @abstractmethod
    def S(self) -> int:
        """Number of memory cells"""
        pass

    @property
    @abstractmethod
    def T(self) -> int:
        """Declared probe budget per query"""
        pass

    @abstractmethod
    def preprocess(self, instance: TsumInstance) -> Memory:
        """Build the memory for an instance (unbounded work)"""
        pass

    @abstractmethod
    def query(self, z: int, handle: ProbeHandle) -> SumsetAnswer:
        """Answer z reading memory only through the handle"""
        pass

    def check_instance(self, instance: TsumInstance) -> None:
        if instance.group != self.group or instance.n != self.n:
            raise InvalidParameters(
                "instance does not match solution parameters",
                solution=self.name,
                n=instance.n,
                expected_n=self.n,
            )

    def info(self) -> SolutionInfo:
        return SolutionInfo(name=self.name, S=self.S, w=self.w, T=self.T, adaptive=self.adaptive)
