"""
Finite abelian group specifications

Groups are cyclic (integers modulo m), XOR (k-bit vectors) or the direct
product of two groups. Elements are canonical non-negative integer ids; a
product element is encoded as left_id * |right| + right_id.
"""

from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, TypeAdapter


def _parse_big_int(value: Any) -> Any:
    if isinstance(value, str):
        text = value.strip()
        if not text.isdigit():
            raise ValueError(f"expected a decimal string, got {value!r}")
        return int(text)
    return value


# Arbitrary-precision integers travel as decimal strings in JSON
BigInt = Annotated[
    int,
    BeforeValidator(_parse_big_int),
    PlainSerializer(lambda v: str(v), return_type=str, when_used="json"),
]


class CyclicGroup(BaseModel):
    """Integers modulo m"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["cyclic"] = "cyclic"
    modulus: BigInt = Field(..., ge=1)

    @property
    def order(self) -> int:
        return self.modulus

    def label(self) -> str:
        return f"cyclic:{self.modulus}"


class XorGroup(BaseModel):
    """Bit vectors of a fixed width under exclusive-or"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["xor"] = "xor"
    width: int = Field(..., ge=0)

    @property
    def order(self) -> int:
        return 1 << self.width

    def label(self) -> str:
        return f"xor:{self.width}"


class ProductGroup(BaseModel):
    """Direct product of two groups"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["product"] = "product"
    left: "GroupSpec"
    right: "GroupSpec"

    @property
    def order(self) -> int:
        return self.left.order * self.right.order

    def label(self) -> str:
        return f"product({self.left.label()},{self.right.label()})"


GroupSpec = Annotated[Union[CyclicGroup, XorGroup, ProductGroup], Field(discriminator="kind")]

ProductGroup.model_rebuild()

GroupSpecAdapter: TypeAdapter = TypeAdapter(GroupSpec)
