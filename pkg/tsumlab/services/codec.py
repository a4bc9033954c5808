"""
Mixed-radix digit codec

Digits are stored least-significant first. The most significant digit never
carries: it wraps modulo its base (cyclic) or combines bitwise (XOR), so a
codec's value space is exactly a cyclic or XOR group of order prod(bases).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from ..exceptions import DigitOutOfRange, InvalidElement, InvalidParameters, LengthMismatch, OrderMismatch, UnsupportedMode
from ..models.group import CyclicGroup, XorGroup
from .groups import AnyGroup


class CodecMode(str, Enum):
    CYCLIC_CARRY = "cyclic"
    XOR_DIGITWISE = "xor"


@dataclass(frozen=True)
class CarryDetected:
    """Signal returned when a digit position would carry"""

    position: int


@dataclass(frozen=True)
class MixedRadixCodec:
    bases: Tuple[int, ...]
    mode: CodecMode = CodecMode.CYCLIC_CARRY
    weights: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.bases:
            raise InvalidParameters("codec needs at least one digit")
        for base in self.bases:
            if base < 2:
                raise InvalidParameters("every base must be at least 2", base=base)
            if self.mode == CodecMode.XOR_DIGITWISE and base & (base - 1):
                raise UnsupportedMode("XOR codec bases must be powers of two", base=base)
        weights = []
        weight = 1
        for base in self.bases:
            weights.append(weight)
            weight *= base
        object.__setattr__(self, "weights", tuple(weights))

    @property
    def length(self) -> int:
        return len(self.bases)

    @property
    def order(self) -> int:
        return self.weights[-1] * self.bases[-1]

    @property
    def group(self) -> AnyGroup:
        if self.mode == CodecMode.XOR_DIGITWISE:
            return XorGroup(width=self.order.bit_length() - 1)
        return CyclicGroup(modulus=self.order)

    def check_group(self, group: AnyGroup) -> None:
        if group.order != self.order:
            raise OrderMismatch("codec order differs from group order", codec=self.order, group=group.order)

    def encode(self, digits: Sequence[int]) -> int:
        if len(digits) != self.length:
            raise LengthMismatch("digit vector has wrong length", expected=self.length, got=len(digits))
        value = 0
        for position, (digit, base, weight) in enumerate(zip(digits, self.bases, self.weights)):
            if not 0 <= digit < base:
                raise DigitOutOfRange("digit not below its base", position=position, digit=digit, base=base)
            value += digit * weight
        return value

    def decode(self, value: int) -> List[int]:
        if not 0 <= value < self.order:
            raise InvalidElement("value outside codec range", element=value, order=self.order)
        digits = []
        for base in self.bases:
            value, digit = divmod(value, base)
            digits.append(digit)
        return digits

    def negate_digit(self, position: int, digit: int) -> int:
        base = self.bases[position]
        if self.mode == CodecMode.XOR_DIGITWISE:
            return (base - 1) ^ digit
        return (-digit) % base

    def add_carry_free(self, a: int, b: int) -> Union[int, CarryDetected]:
        """Digitwise sum, or the lowest position that would carry"""
        da = self.decode(a)
        db = self.decode(b)
        top = self.length - 1
        out = []
        for position, (x, y, base) in enumerate(zip(da, db, self.bases)):
            if self.mode == CodecMode.XOR_DIGITWISE:
                if position < top and x and y:
                    return CarryDetected(position)
                out.append(x ^ y)
            else:
                s = x + y
                if s >= base:
                    if position < top:
                        return CarryDetected(position)
                    s -= base
                out.append(s)
        return self.encode(out)


def codec_encode(codec: MixedRadixCodec, digits: Sequence[int], group: Optional[AnyGroup] = None) -> int:
    """Encode into the ambient group, which defaults to the codec's own"""
    codec.check_group(codec.group if group is None else group)
    return codec.encode(digits)


def codec_decode(codec: MixedRadixCodec, value: int, group: Optional[AnyGroup] = None) -> List[int]:
    codec.check_group(codec.group if group is None else group)
    return codec.decode(value)


def digitwise_add_carry_free(codec: MixedRadixCodec, a: int, b: int) -> Union[int, CarryDetected]:
    return codec.add_carry_free(a, b)
