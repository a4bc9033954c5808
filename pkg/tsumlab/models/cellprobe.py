"""
Cell-probe model types
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import InvalidParameters, WordTooSmall
from .group import BigInt


@dataclass(frozen=True)
class Memory:
    """S cells of w bits produced by preprocessing"""

    cells: Tuple[int, ...]
    w: int

    def __post_init__(self) -> None:
        if self.w < 1:
            raise InvalidParameters("word size must be positive", w=self.w)
        if not self.cells:
            raise InvalidParameters("memory needs at least one cell")
        limit = 1 << self.w
        for index, word in enumerate(self.cells):
            if word < 0 or word >= limit:
                raise WordTooSmall("word does not fit in w bits", cell=index, w=self.w)

    @classmethod
    def from_words(cls, words: Sequence[int], w: int) -> "Memory":
        return cls(cells=tuple(int(word) for word in words), w=w)

    @property
    def S(self) -> int:
        return len(self.cells)


@dataclass
class ProbeTranscript:
    """Ordered log of (cell, word) reads made by one query"""

    probes: List[Tuple[int, int]] = field(default_factory=list)
    adaptive: bool = False
    budget: int = 0

    @property
    def addresses(self) -> List[int]:
        return [cell for cell, _ in self.probes]

    def __len__(self) -> int:
        return len(self.probes)

    def to_model(self) -> "TranscriptModel":
        return TranscriptModel(
            probes=[ProbeRecord(cell=cell, word=word) for cell, word in self.probes],
            adaptive=self.adaptive,
            budget=self.budget,
        )


class ProbeRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    cell: int = Field(..., ge=0)
    word: BigInt = Field(..., ge=0)


class TranscriptModel(BaseModel):
    """JSON view of a ProbeTranscript"""

    probes: List[ProbeRecord] = Field(default_factory=list)
    adaptive: bool = False
    budget: int = Field(default=0, ge=0)


class SolutionInfo(BaseModel):
    """Declared resources of a cell-probe solution"""

    model_config = ConfigDict(frozen=True)

    name: str
    S: int = Field(..., ge=0)
    w: int = Field(..., ge=1)
    T: int = Field(..., ge=0)
    adaptive: bool
