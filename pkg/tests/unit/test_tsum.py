"""
Unit tests for instances, the brute-force oracle and the single-set transform
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from tsumlab.exceptions import InvalidElement, ParameterOverflow
from tsumlab.models.instance import SumsetAnswer, TsumInstance
from tsumlab.services.groups import cyclic, xor_group
from tsumlab.services.tsum import (
    NO_WITNESS,
    brute_force_query,
    brute_force_single_query,
    check_answer,
    from_single_witness,
    make_instance,
    random_instance,
    sumset,
    to_single_set,
)


class TestInstances:
    """Test instance construction and validation."""

    def test_canonical_form(self, cyclic7):
        """Elements are sorted and deduplicated."""
        instance = make_instance(cyclic7, [4, 2, 4], [6, 1])
        assert instance.A1 == [2, 4]
        assert instance.A2 == [1, 6]
        assert instance.n == 2

    def test_padding_uses_smallest_unused(self, cyclic7):
        """The smaller side grows with the smallest ids it lacks."""
        instance = make_instance(cyclic7, [0, 3, 5], [0])
        assert instance.A2 == [0, 1, 2]

    def test_out_of_range_element(self, cyclic7):
        """Ids outside the group are refused."""
        with pytest.raises(InvalidElement):
            make_instance(cyclic7, [7], [1])

    def test_unequal_sizes_rejected(self, cyclic7):
        """A1 and A2 must have equal size."""
        with pytest.raises(ValidationError):
            TsumInstance(group=cyclic7, A1=[1, 2], A2=[3])

    def test_unsorted_rejected(self, cyclic7):
        """Direct construction requires canonical order."""
        with pytest.raises(ValidationError):
            TsumInstance(group=cyclic7, A1=[2, 1], A2=[3, 4])

    def test_random_instance_is_deterministic(self, cyclic101):
        """The same seed draws the same instance."""
        first = random_instance(cyclic101, 8, np.random.default_rng(7))
        second = random_instance(cyclic101, 8, np.random.default_rng(7))
        assert first == second
        assert first.n == 8

    def test_set_size_cap(self, cyclic101, rng, monkeypatch):
        """n above the configured cap raises."""
        from tsumlab.config import load_settings

        monkeypatch.setenv("TSUMLAB_MAX_SET_SIZE", "4")
        load_settings.cache_clear()
        with pytest.raises(ParameterOverflow):
            random_instance(cyclic101, 8, rng)


class TestBruteForce:
    """Test the oracle."""

    def test_witness_found(self, small_instance):
        """z = 6 over Z_7 splits as 2 + 4."""
        assert brute_force_query(small_instance, 6) == SumsetAnswer(exists=True, witness=(2, 4))

    def test_smallest_witness(self, small_instance):
        """z = 5 has only the witness (1, 4)."""
        assert brute_force_query(small_instance, 5).witness == (1, 4)

    def test_no_witness(self, small_instance):
        """z = 0 is outside the sumset."""
        assert brute_force_query(small_instance, 0) == NO_WITNESS

    def test_zero_sum(self):
        """0 + 0 = 0 in Z_5."""
        instance = make_instance(cyclic(5), [0], [0])
        assert brute_force_query(instance, 0).witness == (0, 0)

    def test_empty_instance(self, empty_instance):
        """An empty instance has an empty sumset."""
        assert sumset(empty_instance) == set()
        assert brute_force_query(empty_instance, 3) == NO_WITNESS

    def test_xor_group(self, xor3):
        """In the XOR group a + b = a ^ b."""
        instance = make_instance(xor3, [1, 6], [3, 4])
        assert sumset(instance) == {1 ^ 3, 1 ^ 4, 6 ^ 3, 6 ^ 4}

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(0, 30), max_size=6),
        st.lists(st.integers(0, 30), max_size=6),
        st.integers(0, 30),
    )
    def test_oracle_matches_definition(self, first, second, z):
        """A witness exists iff some pair sums to z."""
        group = cyclic(31)
        instance = make_instance(group, first, second)
        answer = brute_force_query(instance, z)
        exists = any((a1 + a2) % 31 == z for a1 in instance.A1 for a2 in instance.A2)
        assert answer.exists == exists
        assert check_answer(instance, z, answer) is None


class TestCheckAnswer:
    """Test answer auditing."""

    def test_wrong_membership(self, small_instance):
        assert check_answer(small_instance, 6, NO_WITNESS) is not None

    def test_witness_not_members(self, small_instance):
        """A witness must come from the sets."""
        answer = SumsetAnswer(exists=True, witness=(3, 3))
        assert "members" in check_answer(small_instance, 6, answer)

    def test_witness_wrong_sum(self, small_instance):
        answer = SumsetAnswer(exists=True, witness=(1, 2))
        assert "sum" in check_answer(small_instance, 6, answer)

    def test_witness_requires_exists(self):
        """A witness with exists=false is malformed."""
        with pytest.raises(ValidationError):
            SumsetAnswer(exists=False, witness=(1, 2))


class TestSingleSet:
    """Test the two-set to single-set transform."""

    def test_embedding(self):
        """A1 = {1}, A2 = {2} over Z_5 embeds as {1, 7}; query 3 maps to 8."""
        instance = make_instance(cyclic(5), [1], [2])
        single, query_map = to_single_set(instance)
        assert single.A == [1, 7]
        assert single.group.order == 10
        q = query_map(3)
        assert q == 8
        answer = brute_force_single_query(single, q)
        assert answer.witness == (1, 7)
        assert from_single_witness(instance, answer.witness) == (1, 2)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(0, 12), max_size=5),
        st.lists(st.integers(0, 12), max_size=5),
        st.integers(0, 12),
    )
    def test_answers_agree(self, first, second, z):
        """Single-set answers map back to two-set answers."""
        instance = make_instance(cyclic(13), first, second)
        single, query_map = to_single_set(instance)
        expected = brute_force_query(instance, z)
        answer = brute_force_single_query(single, query_map(z))
        assert answer.exists == expected.exists
        if answer.exists:
            a1, a2 = from_single_witness(instance, answer.witness)
            assert (a1 + a2) % 13 == z
            assert a1 in instance.A1 and a2 in instance.A2

    def test_xor_base_group(self):
        """The transform also works over XOR groups."""
        instance = make_instance(xor_group(2), [1], [2])
        single, query_map = to_single_set(instance)
        assert brute_force_single_query(single, query_map(3)).exists
        assert not brute_force_single_query(single, query_map(0)).exists
