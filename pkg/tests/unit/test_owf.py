"""
Unit tests for the immunized function and the inversion experiments
"""

from fractions import Fraction
from itertools import combinations
from math import ceil, log2

import pytest

from tsumlab.exceptions import EqualHalves, InvalidParameters, OutOfDomain
from tsumlab.services.groups import add, cyclic, product, xor_group
from tsumlab.services.inversion import hellman_coverage
from tsumlab.services.owf import (
    HellmanAdversary,
    NullAdversary,
    PairFunction,
    RandomOracle,
    TableAdversary,
    TsumAdversary,
    build_adversary,
    immunized_eval,
    invert_via_tsum,
    pair_count,
    pair_rank,
    pair_unrank,
    preimage_count,
    reference_lines,
    run_experiment,
    trial_mass,
    trial_ranks,
    wilson_interval,
)


@pytest.fixture
def oracle():
    """R over Z_17 with R(0) = 3, R(1) = 5"""
    return RandomOracle(N=2, group=cyclic(17), table=(3, 5), seed=0)


class TestImmunizedFunction:
    """Test F'(x1, x2) = R(x1) + R(x2)."""

    def test_evaluation(self, oracle):
        assert immunized_eval(oracle, 0, 1) == 8
        assert immunized_eval(oracle, 1, 0) == 8

    def test_equal_halves(self, oracle):
        with pytest.raises(EqualHalves):
            immunized_eval(oracle, 1, 1)

    def test_domain(self, oracle):
        with pytest.raises(OutOfDomain):
            oracle(2)

    def test_sampling_is_seeded(self):
        first = RandomOracle.sample(32, cyclic(1009), 4)
        assert first == RandomOracle.sample(32, cyclic(1009), 4)
        assert all(0 <= value < 1009 for value in first.table)

    def test_tiny_domain(self):
        with pytest.raises(InvalidParameters):
            RandomOracle.sample(1, cyclic(5), 0)


class TestPairRanks:
    """Test colex ranking of unordered pairs."""

    def test_first_ranks(self):
        assert [pair_rank(0, 1), pair_rank(0, 2), pair_rank(1, 2), pair_rank(0, 3)] == [0, 1, 2, 3]

    def test_unrank_inverts_rank(self):
        for x1, x2 in combinations(range(20), 2):
            assert pair_unrank(pair_rank(x1, x2)) == (x1, x2)

    def test_ranks_fill_the_domain(self):
        assert sorted(pair_rank(*pair) for pair in combinations(range(9), 2)) == list(range(pair_count(9)))

    def test_equal_halves(self):
        with pytest.raises(EqualHalves):
            pair_rank(2, 2)


class TestPreimages:
    """Test preimage counts and trial masses against enumeration."""

    @pytest.mark.parametrize("group", [cyclic(23), xor_group(4), product(cyclic(2), cyclic(5))])
    def test_counts(self, group):
        R = RandomOracle.sample(12, group, 6)
        for y in range(group.order):
            expected = sum(1 for x1, x2 in combinations(range(12), 2) if immunized_eval(R, x1, x2) == y)
            assert preimage_count(R, y) == expected

    def test_mass_sums_to_one(self):
        R = RandomOracle.sample(10, cyclic(13), 2)
        assert trial_mass(R, range(13)) == 1

    def test_single_value(self, oracle):
        assert trial_mass(oracle, [8]) == 1
        assert trial_mass(oracle, [6]) == 0


class TestTsumInversion:
    """Test inversion through a 3SUM-Indexing data structure."""

    def test_distinct_values(self):
        R = RandomOracle(N=2, group=cyclic(1009), table=(3, 5), seed=0)
        assert invert_via_tsum(R, 8) == (0, 1)

    def test_repeated_value(self):
        """y = a + a needs two preimages of a."""
        R = RandomOracle(N=3, group=cyclic(1009), table=(3, 3, 5), seed=0)
        assert invert_via_tsum(R, 6) == (0, 1)
        assert invert_via_tsum(R, 8) in ((0, 2), (1, 2))

    def test_single_preimage_gives_up(self):
        R = RandomOracle(N=2, group=cyclic(1009), table=(3, 5), seed=0)
        assert invert_via_tsum(R, 6) is None

    def test_smallest_witness_is_an_unusable_double(self):
        """2 + 2 = 4 has one preimage of 2, but 5 + 9 = 4 comes from inputs 1 and 2."""
        R = RandomOracle(N=3, group=cyclic(10), table=(2, 5, 9), seed=0)
        assert immunized_eval(R, 1, 2) == 4
        assert invert_via_tsum(R, 4) == (1, 2)

    @pytest.mark.parametrize("solution", ["sumset", "scan", "hellman"])
    @pytest.mark.parametrize("group", [cyclic(7), xor_group(3), product(cyclic(2), cyclic(3))])
    def test_every_image_value_inverts(self, solution, group):
        """Dense collisions: every value of F' inverts, every other value gives None."""
        R = RandomOracle.sample(12, group, 8)
        image = {immunized_eval(R, x1, x2) for x1, x2 in combinations(range(12), 2)}
        for y in range(group.order):
            pair = invert_via_tsum(R, y, solution=solution)
            if y in image:
                assert pair is not None
                assert pair[0] != pair[1]
                assert immunized_eval(R, *pair) == y
            else:
                assert pair is None

    @pytest.mark.parametrize("solution", ["sumset", "scan"])
    def test_experiment(self, solution):
        """No false inversions; success close to the exact value."""
        report = run_experiment(TsumAdversary(solution=solution), 16, cyclic(1009), trials=200, seed=5)
        assert report.false_inversions == 0
        assert report.exact_success == "1"
        assert report.success == 1.0
        low, high = wilson_interval(report.successes, report.trials, z=4.0)
        assert low <= float(Fraction(report.exact_success)) <= high


class TestAdversaries:
    """Test the preprocessing adversaries."""

    def test_table_always_succeeds(self):
        report = run_experiment(TableAdversary(), 16, cyclic(1009), trials=50, seed=3)
        assert report.success == 1.0
        assert report.exact_success == "1"
        assert report.false_inversions == 0
        assert report.T_oracle == 0

    def test_null_exact(self):
        report = run_experiment(NullAdversary(), 16, cyclic(1009), trials=50, seed=3)
        R = RandomOracle.sample(16, cyclic(1009), 3)
        assert report.exact_success == str(trial_mass(R, [immunized_eval(R, 0, 1)]))
        assert report.S == 0
        assert report.T == 0
        assert report.false_inversions == 0

    def test_hellman_matches_coverage(self):
        """Successes are exactly the trials landing on covered values."""
        adversary = HellmanAdversary(m=8, t=4, seed=1)
        report = run_experiment(adversary, 16, cyclic(1009), trials=100, seed=7)
        R = RandomOracle.sample(16, cyclic(1009), 7)
        f = PairFunction(R)
        covered = hellman_coverage(adversary.table, f, exhaustive=False).values
        expected = sum(1 for rank in trial_ranks(f.N, 100, 7) if f(rank) in covered)
        assert report.successes == expected
        assert report.false_inversions == 0
        assert report.mean_oracle_calls <= adversary.T_oracle

    def test_build_adversary(self):
        assert isinstance(build_adversary("tsum", solution="scan"), TsumAdversary)
        with pytest.raises(InvalidParameters):
            build_adversary("oracle")

    def test_needs_trials(self):
        with pytest.raises(InvalidParameters):
            run_experiment(NullAdversary(), 8, cyclic(17), trials=0, seed=0)


class TestReportHelpers:
    def test_reference_lines(self):
        dtt, hellman = reference_lines(S=10, T=2, D=120)
        assert dtt == pytest.approx(2 * (10 + ceil(log2(120))) / 120)
        assert hellman == pytest.approx(100 * 2 / 120**2)
        assert reference_lines(S=1000, T=5, D=16) == (1.0, 1.0)

    def test_wilson_bounds(self):
        assert wilson_interval(0, 10)[0] == pytest.approx(0.0, abs=1e-12)
        assert wilson_interval(10, 10)[1] == pytest.approx(1.0)
        low, high = wilson_interval(50, 100)
        assert low < 0.5 < high

    def test_trial_ranks(self):
        ranks = trial_ranks(120, 30, 9)
        assert ranks == trial_ranks(120, 30, 9)
        assert all(0 <= r < 120 for r in ranks)

    def test_oracle_group_addition(self):
        R = RandomOracle.sample(5, xor_group(3), 1)
        assert immunized_eval(R, 0, 4) == add(xor_group(3), R(0), R(4))
