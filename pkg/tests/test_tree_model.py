"""
Tests for signatures, addresses, leaf sets and clopen sets.
"""

import os
import random
import sys
from fractions import Fraction

import pytest

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.config import config
from neretin_toolkit.exceptions import (
    CodecError, DepthLimit, EmptyClopen, InvalidAddress, InvalidLeafSet, InvalidSignature, LeafNotPresent,
    SignatureMismatch,
)
from neretin_toolkit.tree.addresses import (
    Address, Clopen, LeafSet, Signature, ball_leafset, clopen_complement, clopen_contains,
    clopen_disjoint, common_refinement, complete_clopen, cylinder_mass, expand_leaf,
    reduced_signature, require_nonempty, validate_address,
)


def addr(text: str) -> Address:
    return Address.parse(text)


def random_leaves(sig: Signature, rng: random.Random, expansions: int = 4) -> LeafSet:
    leaves = LeafSet.base(sig)
    for _ in range(rng.randint(0, expansions)):
        leaves = expand_leaf(leaves, rng.choice(leaves.leaves))
    return leaves


class TestSignature:
    """The pair (d, k)."""

    def test_parse(self):
        sig = Signature.parse("3,2")
        assert (sig.d, sig.k) == (3, 2)
        assert sig.to_list() == [3, 2]

    def test_arity(self):
        sig = Signature(3, 2)
        assert sig.arity(0) == 2
        assert sig.arity(4) == 3

    def test_invalid(self):
        with pytest.raises(InvalidSignature):
            Signature(1, 2)
        with pytest.raises(InvalidSignature):
            Signature(2, 1)
        with pytest.raises(CodecError):
            Signature.parse("two,two")

    def test_single_root_child_needs_flag(self):
        assert Signature(2, 1, non_standard=True).k == 1

    def test_reduced_signature(self):
        assert reduced_signature(Signature(3, 6)) == Signature(3, 2)
        assert reduced_signature(Signature(3, 3)) == Signature(3, 3)
        assert reduced_signature(Signature(2, 5)) == Signature(2, 2)


class TestAddress:
    """Vertices as symbol tuples."""

    def test_parse_digits_and_commas(self):
        assert addr("0110").symbols == (0, 1, 1, 0)
        assert addr("10,3,2").symbols == (10, 3, 2)
        assert addr("").is_root()

    def test_wide_single_symbol_round_trip(self):
        wide = Address.of(12)
        assert wide.to_text() == "12,"
        assert addr(wide.to_text()) == wide

    def test_prefix_relations(self):
        assert addr("01").is_prefix_of(addr("011"))
        assert addr("01").is_prefix_of(addr("01"))
        assert not addr("01").is_proper_prefix_of(addr("01"))
        assert addr("011").comparable(addr("01"))
        assert not addr("00").comparable(addr("01"))

    def test_navigation(self):
        v = addr("101")
        assert v.parent == addr("10")
        assert v.child(0) == addr("1010")
        assert v.prefix(1) == addr("1")
        assert v.suffix_after(addr("1")) == (0, 1)
        assert v.first == 1
        assert v.tail == (0, 1)

    def test_root_has_no_parent(self):
        with pytest.raises(InvalidAddress):
            Address.root().parent

    def test_validate(self):
        sig = Signature(2, 3)
        assert validate_address(sig, addr("21")) == addr("21")
        with pytest.raises(InvalidAddress):
            validate_address(sig, addr("12"))

    def test_malformed(self):
        with pytest.raises(CodecError):
            addr("0a1")

    def test_cylinder_mass(self):
        sig = Signature(2, 3)
        assert cylinder_mass(sig, addr("1")) == Fraction(1, 3)
        assert cylinder_mass(sig, addr("101")) == Fraction(1, 12)


class TestLeafSet:
    """Boundaries of finite complete subtrees."""

    def setup_method(self):
        self.sig = Signature(2, 2)

    def teardown_method(self):
        config.reset()

    def test_base(self):
        assert LeafSet.base(Signature(3, 4)).to_list() == ["0", "1", "2", "3"]

    def test_parse_and_sort(self):
        leaves = LeafSet.parse(self.sig, "{11,0,10}")
        assert leaves.to_list() == ["0", "10", "11"]
        assert leaves.to_text() == "{0,10,11}"
        assert leaves.index(addr("10")) == 1

    def test_invalid_leaf_sets(self):
        with pytest.raises(InvalidLeafSet):
            LeafSet.parse(self.sig, "{0,1,10}")
        with pytest.raises(InvalidLeafSet):
            LeafSet.parse(self.sig, "{0,10}")
        with pytest.raises(InvalidLeafSet):
            LeafSet(self.sig, (addr("0"), addr("0"), addr("1")))

    def test_leaf_not_present(self):
        with pytest.raises(LeafNotPresent):
            LeafSet.base(self.sig).index(addr("01"))

    def test_expand_leaf(self):
        leaves = expand_leaf(LeafSet.base(self.sig), addr("1"))
        assert leaves.to_list() == ["0", "10", "11"]
        with pytest.raises(LeafNotPresent):
            expand_leaf(leaves, addr("1"))

    @pytest.mark.parametrize("d, k, n", [(2, 2, 1), (2, 2, 3), (2, 3, 2), (3, 2, 3)])
    def test_ball_sizes(self, d, k, n):
        sig = Signature(d, k)
        ball = ball_leafset(sig, n)
        assert len(ball) == k * d ** (n - 1)
        assert all(leaf.depth == n for leaf in ball)

    def test_depth_limit(self):
        config.override(depth_limit=4)
        with pytest.raises(DepthLimit):
            ball_leafset(self.sig, 5)
        assert len(ball_leafset(self.sig, 5, depth_limit=8)) == 32

    def test_common_refinement(self):
        first = LeafSet.parse(self.sig, "{0,10,11}")
        second = LeafSet.parse(self.sig, "{00,01,1}")
        common = common_refinement(first, second)
        assert common.to_list() == ["00", "01", "10", "11"]
        assert common.refines(first) and common.refines(second)

    def test_common_refinement_laws(self):
        rng = random.Random(7)
        for sig in (self.sig, Signature(3, 2), Signature(2, 3)):
            for _ in range(20):
                a, b, c = (random_leaves(sig, rng) for _ in range(3))
                assert common_refinement(a, a) == a
                assert common_refinement(a, b) == common_refinement(b, a)
                assert (common_refinement(common_refinement(a, b), c)
                        == common_refinement(a, common_refinement(b, c)))

    def test_common_refinement_signature_mismatch(self):
        with pytest.raises(SignatureMismatch):
            common_refinement(LeafSet.base(self.sig), LeafSet.base(Signature(2, 3)))

    def test_leaf_above(self):
        leaves = LeafSet.parse(self.sig, "{0,10,11}")
        assert leaves.leaf_above(addr("0110")) == addr("0")
        assert leaves.leaf_above(addr("1")) is None
        assert leaves.leaves_below(addr("1")) == [addr("10"), addr("11")]

    def test_complete_clopen(self):
        frame = complete_clopen(self.sig, [addr("010"), addr("11")])
        assert frame.to_list() == ["00", "010", "011", "10", "11"]


class TestClopen:
    """Finite unions of cylinders."""

    def setup_method(self):
        self.sig = Signature(2, 2)

    def test_normalization_merges_siblings(self):
        alpha = Clopen.parse(self.sig, "{10,11}")
        assert alpha.to_list() == ["1"]
        assert alpha.given == (addr("10"), addr("11"))
        assert alpha == Clopen.parse(self.sig, "{1}")
        assert Clopen.parse(self.sig, "{0,01}").to_list() == ["0"]

    def test_root_children_are_not_merged(self):
        assert Clopen.whole(self.sig).to_list() == ["0", "1"]
        assert Clopen.whole(self.sig).is_whole()

    def test_mass(self):
        assert Clopen.parse(self.sig, "{0,10}").mass() == Fraction(3, 4)

    def test_complement(self):
        alpha = Clopen.parse(self.sig, "{0,10}")
        rest = clopen_complement(alpha)
        assert rest.to_list() == ["11"]
        assert clopen_disjoint(alpha, rest)
        assert alpha.union(rest).is_whole()
        assert clopen_complement(Clopen.empty(self.sig)).is_whole()

    def test_containment(self):
        alpha = Clopen.parse(self.sig, "{0,10}")
        assert clopen_contains(alpha, Clopen.parse(self.sig, "{01,10}"))
        assert not clopen_contains(alpha, Clopen.parse(self.sig, "{11}"))
        assert alpha.contains_address(addr("011"))
        assert alpha.meets_address(addr("1"))
        assert not alpha.contains_address(addr("1"))

    def test_empty(self):
        empty = Clopen.parse(self.sig, "{}")
        assert empty.is_empty()
        assert empty.mass() == 0
        with pytest.raises(EmptyClopen):
            require_nonempty(empty)
        alpha = Clopen.parse(self.sig, "{0}")
        assert require_nonempty(alpha) is alpha

    def test_wide_signature_text(self):
        sig = Signature(2, 12)
        alpha = Clopen(sig, (Address.of(11),))
        assert alpha.to_text() == "{11,}"
        assert Clopen.parse(sig, alpha.to_text()) == alpha

    def test_root_rejected(self):
        with pytest.raises(InvalidAddress):
            Clopen(self.sig, (Address.root(),))
