"""
Tests for permutations: parsing, the left-action composition and cycle data.
"""

import os
import sys

import pytest

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.exceptions import CodecError, DegreeMismatch
from neretin_toolkit.groups.permutation import (
    Permutation, parse_generator_list, perm_compose, perm_inverse,
)


class TestPermutation:
    """Permutation values and their algebra."""

    def setup_method(self):
        self.swap = Permutation.parse("(0 1)", 3)
        self.shift = Permutation.parse("(1 2)", 3)

    def test_parse_cycle(self):
        assert Permutation.parse("(0 1 2)", 3).images == (1, 2, 0)

    def test_parse_identity(self):
        assert Permutation.parse("()", 4).is_identity()

    def test_compose_applies_right_factor_first(self):
        product = perm_compose(self.swap, self.shift)
        assert product.images == (1, 2, 0)
        assert all(product(x) == self.swap(self.shift(x)) for x in range(3))

    def test_mul_matches_compose(self):
        assert self.swap * self.shift == self.swap.compose(self.shift)

    def test_inverse(self):
        p = Permutation.parse("(0 3 1)(2 4)", 5)
        assert (p * perm_inverse(p)).is_identity()
        assert (p.inverse() * p).is_identity()

    def test_order_and_power(self):
        p = Permutation.parse("(0 1)(2 3 4)", 5)
        assert p.order() == 6
        assert p.power(6).is_identity()
        assert not p.power(3).is_identity()
        assert p.power(-1) == p.inverse()

    def test_cycles_are_normalized(self):
        p = Permutation.from_cycles([(3, 1, 4), (2, 0)], 5)
        assert p.cycles() == [(0, 2), (1, 4, 3)]
        assert p.to_cycle_string() == "(0 2)(1 4 3)"
        assert Permutation.parse(p.to_cycle_string(), 5) == p

    def test_support_and_fixes(self):
        p = Permutation.parse("(1 3)", 5)
        assert p.support() == (1, 3)
        assert p.fixes(0) and not p.fixes(1)

    def test_sympy_round_trip(self):
        p = Permutation.parse("(0 4 2)(1 3)", 5)
        assert Permutation.from_sympy(p.to_sympy()) == p

    def test_compose_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            self.swap.compose(Permutation.identity(4))

    def test_not_a_permutation(self):
        with pytest.raises(CodecError):
            Permutation((0, 0, 1))

    def test_malformed_cycle_notation(self):
        with pytest.raises(CodecError):
            Permutation.parse("(0 1", 3)
        with pytest.raises(CodecError):
            Permutation.parse("(0 1)(1 2)", 3)
        with pytest.raises(CodecError):
            Permutation.parse("(0 5)", 3)


class TestGeneratorList:
    """Comma separated generator lists as used on the command line."""

    def test_infers_degree(self):
        gens = parse_generator_list("(0 1),(0 1 2 3)")
        assert [g.degree for g in gens] == [4, 4]
        assert gens[1].images == (1, 2, 3, 0)

    def test_explicit_degree(self):
        gens = parse_generator_list("(0 1)", degree=6)
        assert gens[0].degree == 6

    def test_products_of_cycles_stay_together(self):
        gens = parse_generator_list("(0 1)(2 3),(0 2)")
        assert len(gens) == 2
        assert gens[0].cycles() == [(0, 1), (2, 3)]

    def test_empty_list(self):
        with pytest.raises(CodecError):
            parse_generator_list("nothing here")
