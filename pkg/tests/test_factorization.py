"""
Tests for the factorization machinery: prime intervals, Jordan's criterion,
alternating-group recognition and the factorization verdicts.
"""

import os
import sys
from fractions import Fraction

import pytest

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.exceptions import NoWitness, NotTransitive, OmegaTooSmall
from neretin_toolkit.groups.factorization import (
    CONTAINS_ALT, FIXES_POINT, NEITHER, alt_complement_points, alt_omega_witness,
    classify_factorization, contains_alt_on, factorization_orbit_claim,
    first_degree_with_prime_count, jordan_check, prime_count_half_interval, prime_cycle_power,
    primes_in_interval, subset_orbit_transitive,
)
from neretin_toolkit.groups.group import PermGroup
from neretin_toolkit.groups.permutation import Permutation, parse_generator_list
from neretin_toolkit.groups.subgroups import enumerate_subgroups_small


class TestPrimeIntervals:
    """Primes in [n/2, n]."""

    def test_primes_in_interval(self):
        assert primes_in_interval(Fraction(13, 2), 13) == [7, 11, 13]
        assert primes_in_interval(Fraction(5, 2), 5) == [3, 5]
        assert primes_in_interval(0, 1) == []
        assert primes_in_interval(5, 4) == []

    def test_closed_and_half_open_counts(self):
        assert prime_count_half_interval(13) == 3
        assert prime_count_half_interval(13, closed=False) == 2
        assert prime_count_half_interval(14, closed=False) == 3

    def test_first_degree_with_three_primes(self):
        assert first_degree_with_prime_count(3) == 13
        assert first_degree_with_prime_count(3, closed=False) == 14

    def test_matches_trial_division(self):
        def is_prime(p):
            return p > 1 and all(p % q for q in range(2, p))

        for n in range(1, 60):
            expected = [p for p in range(n + 1) if 2 * p >= n and is_prime(p)]
            assert primes_in_interval(Fraction(n, 2), n) == expected


class TestAlternatingRecognition:
    """Alt(Omega) membership through 3-cycles."""

    def test_contains_alt(self):
        assert contains_alt_on(PermGroup.symmetric(5), range(5))
        assert contains_alt_on(PermGroup.alternating(5), range(5))
        assert not contains_alt_on(PermGroup(parse_generator_list("(0 1 2 3 4)")), range(5))

    def test_partial_omega(self):
        stabilizer = PermGroup.point_stabilizer(5, 0)
        assert contains_alt_on(stabilizer, [1, 2, 3, 4])
        assert not contains_alt_on(stabilizer, range(5))

    def test_omega_too_small(self):
        with pytest.raises(OmegaTooSmall):
            contains_alt_on(PermGroup.symmetric(4), [0, 1])
        with pytest.raises(OmegaTooSmall):
            contains_alt_on(PermGroup.symmetric(4), [0, 1, 7])


class TestClassifyFactorization:
    """ContainsAlt / FixesPointWithAltComplement / Neither."""

    def test_symmetric_group(self):
        assert classify_factorization(PermGroup.symmetric(6)).tag == CONTAINS_ALT

    def test_point_stabilizer(self):
        verdict = classify_factorization(PermGroup.point_stabilizer(6, 2))
        assert verdict.tag == FIXES_POINT
        assert verdict.point == 2
        assert verdict.to_dict() == {'verdict': FIXES_POINT, 'point': 2}

    def test_imprimitive_group_is_neither(self):
        dihedral = PermGroup(parse_generator_list("(0 1 2 3),(0 2)"))
        assert classify_factorization(dihedral).tag == NEITHER

    def test_trivial_group_of_degree_two(self):
        trivial = PermGroup.trivial(2)
        assert classify_factorization(trivial).tag == CONTAINS_ALT
        assert alt_complement_points(trivial) == [0, 1]

    @pytest.mark.parametrize("degree", [4, 5])
    def test_agrees_with_alternating_recognition(self, degree):
        for g in enumerate_subgroups_small(degree):
            verdict = classify_factorization(g)
            contains_alt = contains_alt_on(g, range(degree))
            fixers = [x for x in g.fixed_points()
                      if contains_alt_on(g, [y for y in range(degree) if y != x])]
            if contains_alt:
                expected = (CONTAINS_ALT, None)
            elif fixers:
                expected = (FIXES_POINT, fixers[0])
            else:
                expected = (NEITHER, None)
            assert (verdict.tag, verdict.point) == expected
            if g.is_transitive():
                assert jordan_check(g).contains_alt == contains_alt

    def test_orbit_claim(self):
        claim = factorization_orbit_claim(PermGroup.point_stabilizer(5, 0))
        assert claim.orbit_sizes == [4, 1]
        assert claim.at_most_two_orbits
        assert claim.large_orbit


class TestJordan:
    """Jordan's prime-cycle criterion."""

    def test_symmetric_group(self):
        report = jordan_check(PermGroup.symmetric(5))
        assert report.primitive
        assert report.prime_cycle_witness is not None
        assert report.prime_cycle_witness[0] == 2
        assert report.jordan_applies
        assert report.contains_alt
        assert not report.violates_theorem

    def test_cyclic_group_of_prime_degree(self):
        report = jordan_check(PermGroup(parse_generator_list("(0 1 2 3 4)")))
        assert report.primitive
        assert report.prime_cycle_witness is None
        assert not report.jordan_applies
        assert not report.contains_alt

    def test_report_dict(self):
        data = jordan_check(PermGroup.symmetric(5)).to_dict()
        assert data['prime_cycle_witness']['p'] == 2
        assert data['contains_alt'] is True

    def test_not_transitive(self):
        with pytest.raises(NotTransitive):
            jordan_check(PermGroup(parse_generator_list("(0 1)", 3)))

    def test_prime_cycle_power(self):
        element = Permutation.parse("(0 1 2)(3 4)", 5)
        p, power = prime_cycle_power(element, 2)
        assert p == 2
        assert power == Permutation.parse("(3 4)", 5)

    def test_prime_cycle_power_none(self):
        assert prime_cycle_power(Permutation.parse("(0 1 2)(3 4 5 6 7 8)", 9), 5) is None


class TestAltWitness:
    """Two prime cycles with primes above n/2."""

    def test_symmetric_group_of_degree_seven(self):
        witness = alt_omega_witness(PermGroup.symmetric(7))
        assert witness.primes == (5, 7)
        assert witness.alpha.cycle_lengths() == [5]
        assert witness.beta.cycle_lengths() == [7]
        assert witness.omega == tuple(range(7))
        assert witness.contains_alt

    def test_alternating_group_of_degree_fourteen(self):
        witness = alt_omega_witness(PermGroup.alternating(14))
        assert witness.primes == (11, 13)
        assert witness.alpha.cycle_lengths() == [11]
        assert witness.beta.cycle_lengths() == [13]
        assert len(witness.omega) >= 11
        assert witness.large_enough
        assert witness.contains_alt

    def test_symmetric_group_on_thirteen_of_fourteen_points(self):
        witness = alt_omega_witness(PermGroup.symmetric(14, points=range(13)))
        assert witness.primes == (11, 13)
        assert set(witness.omega) <= set(range(13))
        assert len(witness.omega) >= 11
        assert witness.contains_alt

    def test_no_two_primes(self):
        with pytest.raises(NoWitness):
            alt_omega_witness(PermGroup(parse_generator_list("(0 1 2 3)")))


class TestSubsetOrbits:
    """Transitivity on unordered subsets."""

    def test_symmetric_group(self):
        assert subset_orbit_transitive(PermGroup.symmetric(4), 2)

    def test_dihedral_group(self):
        assert not subset_orbit_transitive(PermGroup(parse_generator_list("(0 1 2 3),(0 2)")), 2)
