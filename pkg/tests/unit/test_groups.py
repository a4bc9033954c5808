"""
Unit tests for group arithmetic and group specs
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from tsumlab.exceptions import GroupTooLarge, InstanceFormatError, InvalidElement
from tsumlab.models.group import GroupSpecAdapter
from tsumlab.services.groups import (
    add,
    bit_width,
    check_cap,
    cyclic,
    negate,
    parse_group,
    product,
    random_below,
    sample_distinct,
    subtract,
    xor_group,
)

GROUPS = [cyclic(1), cyclic(5), cyclic(12), xor_group(3), product(cyclic(2), cyclic(5)), product(xor_group(1), cyclic(3))]


class TestGroupLaw:
    """Test add, negate and subtract."""

    def test_cyclic_add(self):
        """3 + 4 = 2 in Z_5."""
        assert add(cyclic(5), 3, 4) == 2

    def test_xor_add(self):
        """Bitwise xor in a 3-bit group."""
        assert add(xor_group(3), 0b101, 0b011) == 0b110

    def test_product_add(self):
        """(0,1) + (1,2) = (1,3) with ids 1 + 7 = 8."""
        assert add(product(cyclic(2), cyclic(5)), 1, 7) == 8

    def test_negate(self):
        """Negation in cyclic, xor and trivial groups."""
        assert negate(cyclic(7), 3) == 4
        assert negate(xor_group(4), 9) == 9
        assert negate(cyclic(1), 0) == 0

    def test_out_of_range_element(self):
        """Ids outside [0, |G|) are rejected."""
        with pytest.raises(InvalidElement):
            add(cyclic(5), 5, 0)
        with pytest.raises(InvalidElement):
            negate(xor_group(2), -1)

    @pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.label())
    def test_axioms_exhaustive(self, group):
        """Identity, inverses, commutativity and associativity on small groups."""
        ids = range(group.order)
        for a in ids:
            assert add(group, a, 0) == a
            assert add(group, a, negate(group, a)) == 0
            for b in ids:
                assert add(group, a, b) == add(group, b, a)
                assert subtract(group, add(group, a, b), b) == a

    @given(st.integers(0, 999), st.integers(0, 999), st.integers(0, 999))
    def test_cyclic_associativity(self, a, b, c):
        """(a + b) + c = a + (b + c) in Z_1000."""
        g = cyclic(1000)
        assert add(g, add(g, a, b), c) == add(g, a, add(g, b, c))

    @given(st.integers(0, 2**70 - 1), st.integers(0, 2**70 - 1))
    def test_large_xor_group(self, a, b):
        """Ids beyond 64 bits behave like bit vectors."""
        g = xor_group(70)
        assert add(g, add(g, a, b), b) == a


class TestGroupSpecs:
    """Test parsing, caps and wire format."""

    def test_parse_group(self):
        """Text specs parse to the matching model."""
        assert parse_group("cyclic:97").order == 97
        assert parse_group("xor:4").order == 16
        assert parse_group("product(xor:1,cyclic:5)").order == 10
        assert parse_group("product(product(cyclic:2,cyclic:3),xor:2)").label() == "product(product(cyclic:2,cyclic:3),xor:2)"

    @pytest.mark.parametrize("text", ["ring:5", "cyclic:x", "product(cyclic:2)", "cyclic:0"])
    def test_parse_group_errors(self, text):
        """Unknown kinds and bad numbers raise InstanceFormatError or a validation error."""
        with pytest.raises((InstanceFormatError, ValidationError)):
            parse_group(text)

    def test_big_modulus_is_a_decimal_string(self):
        """Group ids travel as decimal strings in JSON."""
        group = cyclic(2**80)
        data = group.model_dump(mode="json")
        assert data == {"kind": "cyclic", "modulus": str(2**80)}
        assert GroupSpecAdapter.validate_python(data) == group

    def test_check_cap(self):
        """Groups above the cap are refused."""
        check_cap(cyclic(16), 16)
        with pytest.raises(GroupTooLarge):
            check_cap(cyclic(17), 16)

    def test_bit_width(self):
        """Bits needed for the largest id."""
        assert bit_width(cyclic(1)) == 1
        assert bit_width(cyclic(16)) == 4
        assert bit_width(cyclic(17)) == 5


class TestRandomness:
    """Test seeded sampling helpers."""

    def test_sample_distinct_sorted_and_unique(self):
        """k distinct sorted ids below the bound."""
        values = sample_distinct(np.random.default_rng(0), 50, 20)
        assert values == sorted(set(values))
        assert len(values) == 20
        assert all(0 <= v < 50 for v in values)

    def test_sample_distinct_reproducible(self):
        """The same seed gives the same sample."""
        first = sample_distinct(np.random.default_rng(7), 10**6, 5)
        second = sample_distinct(np.random.default_rng(7), 10**6, 5)
        assert first == second

    def test_random_below_huge_bound(self):
        """Bounds past 64 bits are sampled from 32-bit limbs."""
        rng = np.random.default_rng(3)
        bound = 3 * 2**90 + 1
        assert all(0 <= random_below(rng, bound) < bound for _ in range(50))

    def test_sample_too_many(self):
        """Cannot draw more distinct ids than exist."""
        with pytest.raises(InvalidElement):
            sample_distinct(np.random.default_rng(0), 3, 4)
