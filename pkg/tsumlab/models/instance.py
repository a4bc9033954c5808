"""
Instance and answer models
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .group import BigInt, GroupSpec


def _check_strictly_increasing(values: List[int], name: str) -> None:
    for previous, current in zip(values, values[1:]):
        if current <= previous:
            raise ValueError(f"{name} must be sorted and duplicate-free")


class TsumInstance(BaseModel):
    """A 3SUM-Indexing instance: two sorted element lists of equal size n"""

    model_config = ConfigDict(frozen=True)

    group: GroupSpec
    A1: List[BigInt] = Field(default_factory=list)
    A2: List[BigInt] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_sets(self) -> "TsumInstance":
        if len(self.A1) != len(self.A2):
            raise ValueError("A1 and A2 must have the same size")
        order = self.group.order
        for name, values in (("A1", self.A1), ("A2", self.A2)):
            _check_strictly_increasing(values, name)
            if values and (values[0] < 0 or values[-1] >= order):
                raise ValueError(f"{name} contains an element outside the group")
        return self

    @property
    def n(self) -> int:
        return len(self.A1)


class SingleSetInstance(BaseModel):
    """Single-set variant: does q split as x + y with x != y both in A?"""

    model_config = ConfigDict(frozen=True)

    group: GroupSpec
    A: List[BigInt] = Field(default_factory=list)

    @field_validator("A")
    @classmethod
    def validate_elements(cls, v: List[int]) -> List[int]:
        _check_strictly_increasing(v, "A")
        return v

    @model_validator(mode="after")
    def validate_range(self) -> "SingleSetInstance":
        if self.A and self.A[-1] >= self.group.order:
            raise ValueError("A contains an element outside the group")
        return self


class SumsetAnswer(BaseModel):
    """Answer to a query z: membership plus an optional witness (a1, a2)"""

    model_config = ConfigDict(frozen=True)

    exists: bool
    witness: Optional[Tuple[BigInt, BigInt]] = None

    @model_validator(mode="after")
    def validate_witness(self) -> "SumsetAnswer":
        if self.witness is not None and not self.exists:
            raise ValueError("a witness requires exists=true")
        return self


class SubsetRealization(BaseModel):
    """An instance whose sumset meets Q exactly in P"""

    model_config = ConfigDict(frozen=True)

    Q: List[BigInt]
    P: List[BigInt]
    n: int = Field(..., ge=1)
    instance: TsumInstance


class ButterflyInstance(BaseModel):
    """
    Subgraph of the d-layer butterfly with fan-out B.

    ``edges`` is a presence string over the d * B^(d+1) template edges in
    (layer, source, digit) order, '1' meaning present.
    """

    model_config = ConfigDict(frozen=True)

    B: int = Field(..., ge=2)
    d: int = Field(..., ge=1)
    edges: str

    @model_validator(mode="after")
    def validate_edges(self) -> "ButterflyInstance":
        expected = self.d * self.B ** (self.d + 1)
        if len(self.edges) != expected:
            raise ValueError(f"edge string must have length {expected}")
        if set(self.edges) - {"0", "1"}:
            raise ValueError("edge string may only contain '0' and '1'")
        return self

    def is_present(self, index: int) -> bool:
        return self.edges[index] == "1"


class LsdInstance(BaseModel):
    """
    Lopsided set disjointness: Alice holds one value per block, Bob holds a
    set of (block, value) pairs.
    """

    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1)
    B: int = Field(..., ge=1)
    X: List[Tuple[int, int]] = Field(default_factory=list)
    Y: List[int]

    @field_validator("X")
    @classmethod
    def validate_pairs(cls, v: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        return sorted(set(tuple(pair) for pair in v))

    @model_validator(mode="after")
    def validate_ranges(self) -> "LsdInstance":
        if len(self.Y) != self.N:
            raise ValueError("Y must hold exactly one value per block")
        for i, b in self.X:
            if not (0 <= i < self.N and 0 <= b < self.B):
                raise ValueError(f"pair ({i}, {b}) outside [N] x [B]")
        if any(not 0 <= b < self.B for b in self.Y):
            raise ValueError("Y values must lie in [B]")
        return self
