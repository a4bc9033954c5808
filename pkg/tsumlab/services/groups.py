"""
Group arithmetic over canonical element ids
"""

from typing import Callable, List, Union

import numpy as np

from ..exceptions import GroupTooLarge, InstanceFormatError, InvalidElement
from ..models.group import CyclicGroup, ProductGroup, XorGroup

BinaryOp = Callable[[int, int], int]
AnyGroup = Union[CyclicGroup, XorGroup, ProductGroup]


def cyclic(modulus: int) -> CyclicGroup:
    return CyclicGroup(modulus=modulus)


def xor_group(width: int) -> XorGroup:
    return XorGroup(width=width)


def product(left: AnyGroup, right: AnyGroup) -> ProductGroup:
    return ProductGroup(left=left, right=right)


def order(group: AnyGroup) -> int:
    return group.order


def bit_width(group: AnyGroup) -> int:
    """Bits needed to store any element id"""
    return max(1, (group.order - 1).bit_length())


def validate(group: AnyGroup, a: int) -> int:
    if not isinstance(a, int) or isinstance(a, bool) or a < 0 or a >= group.order:
        raise InvalidElement("element outside group", element=a, order=group.order)
    return a


def check_cap(group: AnyGroup, cap: int) -> None:
    if group.order > cap:
        raise GroupTooLarge("group order exceeds cap", order=group.order, cap=cap)


def elements(group: AnyGroup) -> range:
    return range(group.order)


def _unchecked_add(group: AnyGroup, a: int, b: int) -> int:
    if isinstance(group, CyclicGroup):
        s = a + b
        return s - group.modulus if s >= group.modulus else s
    if isinstance(group, XorGroup):
        return a ^ b
    r = group.right.order
    la, ra = divmod(a, r)
    lb, rb = divmod(b, r)
    return _unchecked_add(group.left, la, lb) * r + _unchecked_add(group.right, ra, rb)


def _unchecked_negate(group: AnyGroup, a: int) -> int:
    if isinstance(group, CyclicGroup):
        return (group.modulus - a) % group.modulus
    if isinstance(group, XorGroup):
        return a
    r = group.right.order
    la, ra = divmod(a, r)
    return _unchecked_negate(group.left, la) * r + _unchecked_negate(group.right, ra)


def add(group: AnyGroup, a: int, b: int) -> int:
    validate(group, a)
    validate(group, b)
    return _unchecked_add(group, a, b)


def negate(group: AnyGroup, a: int) -> int:
    validate(group, a)
    return _unchecked_negate(group, a)


def subtract(group: AnyGroup, a: int, b: int) -> int:
    validate(group, a)
    validate(group, b)
    return _unchecked_add(group, a, _unchecked_negate(group, b))


def adder(group: AnyGroup) -> BinaryOp:
    """Unchecked addition specialised to the group kind, for inner loops"""
    if isinstance(group, CyclicGroup):
        m = group.modulus
        return lambda a, b: (a + b) % m
    if isinstance(group, XorGroup):
        return lambda a, b: a ^ b
    return lambda a, b: _unchecked_add(group, a, b)


def subtractor(group: AnyGroup) -> BinaryOp:
    if isinstance(group, CyclicGroup):
        m = group.modulus
        return lambda a, b: (a - b) % m
    if isinstance(group, XorGroup):
        return lambda a, b: a ^ b
    return lambda a, b: _unchecked_add(group, a, _unchecked_negate(group, b))


def random_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for bounds of any size"""
    if bound <= 0:
        raise InvalidElement("empty range", bound=bound)
    if bound <= 2**62:
        return int(rng.integers(0, bound))
    limbs = (bound.bit_length() + 31) // 32
    while True:
        value = 0
        for limb in rng.integers(0, 2**32, size=limbs, dtype=np.uint64):
            value = (value << 32) | int(limb)
        value >>= limbs * 32 - bound.bit_length()
        if value < bound:
            return value


def random_element(rng: np.random.Generator, group: AnyGroup) -> int:
    return random_below(rng, group.order)


def sample_distinct(rng: np.random.Generator, bound: int, k: int) -> List[int]:
    """k distinct ids from [0, bound), sorted"""
    if k > bound:
        raise InvalidElement("cannot sample more distinct ids than exist", k=k, bound=bound)
    if bound <= 2**20 and k * 4 >= bound:
        return sorted(int(x) for x in rng.permutation(bound)[:k])
    chosen = set()
    while len(chosen) < k:
        chosen.add(random_below(rng, bound))
    return sorted(chosen)


def parse_group(text: str) -> AnyGroup:
    """Parse 'cyclic:m', 'xor:k' or 'product(<g>,<g>)'"""
    spec = text.strip()
    try:
        if spec.startswith("product(") and spec.endswith(")"):
            inner = spec[len("product(") : -1]
            depth = 0
            for index, char in enumerate(inner):
                if char == "(":
                    depth += 1
                elif char == ")":
                    depth -= 1
                elif char == "," and depth == 0:
                    return product(parse_group(inner[:index]), parse_group(inner[index + 1 :]))
            raise ValueError("product needs two factors")
        kind, _, value = spec.partition(":")
        if kind == "cyclic":
            return cyclic(int(value))
        if kind == "xor":
            return xor_group(int(value))
    except (ValueError, TypeError) as e:
        raise InstanceFormatError(f"bad group spec: {e}", location=text)
    raise InstanceFormatError("unknown group kind", location=text)
