"""
Unit tests for the set disjointness reduction
"""

from itertools import combinations
from itertools import product as cartesian

import numpy as np
import pytest
from pydantic import ValidationError

from tsumlab.exceptions import InvalidParameters
from tsumlab.models.instance import LsdInstance
from tsumlab.services.lsd import (
    LsdMode,
    auto_parameters,
    bob_instance,
    decide_disjointness,
    direct_disjoint,
    encode_alice,
    encode_bob,
    pad_instance,
    random_lsd_instance,
    simulate_protocol,
)
from tsumlab.services.solutions.registry import prepare
from tsumlab.services.tsum import sumset


@pytest.fixture
def single_pair():
    """B = 2, one block, Bob holds (0, 1)"""
    return LsdInstance(N=1, B=2, X=[(0, 1)], Y=[1])


class TestInstance:
    """Test LSD instance validation."""

    def test_pairs_sorted_and_deduplicated(self):
        instance = LsdInstance(N=2, B=3, X=[(1, 2), (0, 1), (1, 2)], Y=[0, 0])
        assert instance.X == [(0, 1), (1, 2)]

    def test_pair_out_of_range(self):
        with pytest.raises(ValidationError):
            LsdInstance(N=2, B=3, X=[(2, 0)], Y=[0, 0])

    def test_one_value_per_block(self):
        with pytest.raises(ValidationError):
            LsdInstance(N=2, B=3, Y=[0])

    def test_direct_check(self, single_pair):
        assert not direct_disjoint(single_pair)
        assert direct_disjoint(LsdInstance(N=1, B=2, X=[(0, 1)], Y=[0]))

    def test_padding(self):
        """N is rounded up to a multiple of ell with empty blocks."""
        padded = pad_instance(LsdInstance(N=5, B=2, Y=[1] * 5), 2)
        assert padded.N == 6
        assert padded.Y[-1] == 0

    def test_ell_must_be_positive(self, single_pair):
        with pytest.raises(InvalidParameters):
            pad_instance(single_pair, 0)


class TestEncoding:
    """Test the encoding of Bob's and Alice's inputs."""

    def test_single_pair(self, single_pair):
        """X = {(0, 1)} with B = 2 and ell = 1 encodes as A1 = {2}, A2 = {0}."""
        encoding = encode_bob(single_pair, 1)
        assert encoding.A1 == (2,)
        assert encoding.A2 == (0,)
        assert encoding.group.order == 125

    def test_alice_query(self, single_pair):
        assert encode_alice(single_pair, 1) == [2]
        assert encode_alice(LsdInstance(N=1, B=2, X=[(0, 1)], Y=[0]), 1) == [1]

    def test_wildcards_per_group(self):
        """A2 holds ell * B^(ell-1) vectors."""
        encoding = encode_bob(LsdInstance(N=2, B=3, Y=[0, 0]), 2)
        assert len(encoding.A2) == 2 * 3

    def test_padding_never_meets_queries(self):
        """Dummy sums stay away from every Alice query."""
        instance = LsdInstance(N=4, B=2, X=[(0, 0)], Y=[1, 1, 1, 1])
        encoding = encode_bob(instance, 2)
        padded = bob_instance(encoding)
        assert padded.n == max(len(encoding.A1), len(encoding.A2))
        queries = set(encode_alice(instance, 2))
        assert not queries & sumset(padded)


class TestDecision:
    """Test disjointness through the oracle and through solutions."""

    def test_intersecting(self, single_pair):
        decision = decide_disjointness(single_pair, 1)
        assert not decision.disjoint
        assert decision.consistent

    def test_disjoint(self):
        decision = decide_disjointness(LsdInstance(N=1, B=2, X=[(0, 1)], Y=[0]), 1)
        assert decision.disjoint
        assert decision.consistent

    @pytest.mark.parametrize("ell", [1, 2, 3])
    @pytest.mark.parametrize("mode", [LsdMode.CYCLIC, LsdMode.XOR])
    def test_random_instances(self, ell, mode):
        """The verdict matches the direct check on random inputs."""
        rng = np.random.default_rng(ell)
        for _ in range(5):
            instance = random_lsd_instance(6, 3, 4, rng)
            decision = decide_disjointness(instance, ell, mode=mode)
            assert decision.consistent

    def test_through_solution(self):
        instance = random_lsd_instance(4, 2, 3, np.random.default_rng(1))
        ds = prepare("sumset", bob_instance(encode_bob(instance, 2)))
        assert decide_disjointness(instance, 2, ds=ds).consistent

    @pytest.mark.parametrize("ell", [1, 2])
    @pytest.mark.parametrize("mode", [LsdMode.CYCLIC, LsdMode.XOR])
    def test_every_small_instance(self, ell, mode):
        """All X and all Y for N, B <= 2."""
        for N in (1, 2):
            for B in (1, 2):
                cells = list(cartesian(range(N), range(B)))
                for size in range(len(cells) + 1):
                    for X in combinations(cells, size):
                        for Y in cartesian(range(B), repeat=N):
                            instance = LsdInstance(N=N, B=B, X=list(X), Y=list(Y))
                            decision = decide_disjointness(instance, ell, mode=mode)
                            assert decision.consistent
                            assert decision.disjoint == (not set(X) & set(enumerate(Y)))


class TestProtocol:
    """Test the simulated communication protocol."""

    def test_one_round_for_bit_vector(self, single_pair):
        ds = prepare("sumset-decision", bob_instance(encode_bob(single_pair, 1)))
        stats = simulate_protocol(single_pair, 1, ds)
        assert stats.rounds == 1
        assert len(stats.per_round) == 1
        assert stats.bob_bits == ds.solution.w
        assert stats.consistent
        assert not stats.verdict_disjoint

    def test_scan_protocol(self):
        instance = random_lsd_instance(4, 2, 2, np.random.default_rng(3))
        ds = prepare("scan", bob_instance(encode_bob(instance, 1)))
        stats = simulate_protocol(instance, 1, ds)
        assert stats.consistent
        assert stats.queries == 4
        assert all(step.cells <= 4 for step in stats.per_round)


class TestAutoParameters:
    def test_defaults(self):
        """B = w^4, ell from epsilon log n / log w."""
        assert auto_parameters(4, 256) == (256, 2)
        assert auto_parameters(64, 8) == (64**4, 1)

    def test_invalid(self):
        with pytest.raises(InvalidParameters):
            auto_parameters(1, 8)
