"""
Tests for the exhaustive subgroup enumeration of small symmetric groups.
"""

import os
import sys
from math import factorial

import pytest

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.exceptions import DegreeTooLarge
from neretin_toolkit.groups.factorization import jordan_check
from neretin_toolkit.groups.subgroups import enumerate_subgroups_small


class TestSubgroupEnumeration:
    """Counts and basic shape of the enumeration."""

    @pytest.mark.parametrize("degree, count", [(1, 1), (2, 2), (3, 6), (4, 30), (5, 156)])
    def test_counts(self, degree, count):
        assert len(enumerate_subgroups_small(degree)) == count

    def test_sorted_by_order(self):
        groups = enumerate_subgroups_small(4)
        orders = [g.order for g in groups]
        assert orders == sorted(orders)
        assert orders[0] == 1
        assert orders[-1] == factorial(4)

    def test_each_subgroup_once(self):
        groups = enumerate_subgroups_small(4)
        element_sets = {frozenset(p.images for p in g.elements()) for g in groups}
        assert len(element_sets) == len(groups)

    def test_order_divides_group_order(self):
        assert all(factorial(5) % g.order == 0 for g in enumerate_subgroups_small(5))

    def test_jordan_never_violated(self):
        for degree in (4, 5):
            for group in enumerate_subgroups_small(degree):
                if group.is_transitive():
                    assert not jordan_check(group).violates_theorem

    def test_degree_out_of_range(self):
        with pytest.raises(DegreeTooLarge):
            enumerate_subgroups_small(7)
        with pytest.raises(DegreeTooLarge):
            enumerate_subgroups_small(0)
