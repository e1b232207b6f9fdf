"""
Tests for invertible Mealy machines.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.elements.machine import (
    TailMachine, disjoint_union, machine_minimize, product_machine,
)
from neretin_toolkit.exceptions import InvalidElement


class TestTailMachine:
    """Construction, action and inversion."""

    def setup_method(self):
        self.odometer = TailMachine.odometer(2)

    def test_odometer_adds_one(self):
        image, state = self.odometer.act(1, (1, 1, 0))
        assert image == (0, 0, 1)
        assert state == 0

    def test_odometer_carry_never_stops_on_all_ones(self):
        image, state = self.odometer.act(1, (1, 1, 1, 1))
        assert image == (0, 0, 0, 0)
        assert state == 1

    def test_inverse_undoes_action(self):
        word = (0, 1, 1, 0, 1)
        image, _ = self.odometer.act(1, word)
        back, _ = self.odometer.inverse().act(1, image)
        assert back == word

    def test_trivial(self):
        trivial = TailMachine.trivial(3)
        assert trivial.states == 1
        assert trivial.act(0, (2, 0, 1)) == ((2, 0, 1), 0)

    def test_output_row_must_be_permutation(self):
        with pytest.raises(InvalidElement):
            TailMachine.from_rows([[0, 0], [0, 0]], [[0, 1], [0, 0]])

    def test_identity_state_must_act_trivially(self):
        with pytest.raises(InvalidElement):
            TailMachine.from_rows([[0, 0]], [[1, 0]])

    def test_transition_out_of_range(self):
        with pytest.raises(InvalidElement):
            TailMachine.from_rows([[0, 0], [0, 5]], [[0, 1], [1, 0]])

    def test_to_dict(self):
        assert self.odometer.to_dict() == {
            'states': [0, 1],
            'delta': [[0, 0], [0, 1]],
            'lambda': [[0, 1], [1, 0]],
            'id': 0,
        }


class TestMachineAlgebra:
    """Products, minimization and identity detection."""

    def setup_method(self):
        self.odometer = TailMachine.odometer(2)

    def test_product_with_inverse_acts_trivially(self):
        product, numbering = product_machine(self.odometer, self.odometer.inverse(), [(1, 1)])
        state = numbering[(1, 1)]
        assert product.is_identity_acting(state)
        minimal, mapping = machine_minimize(product)
        assert minimal.states == 1
        assert mapping[state] == minimal.identity

    def test_square_of_odometer_moves(self):
        square, numbering = product_machine(self.odometer, self.odometer, [(1, 1)])
        state = numbering[(1, 1)]
        assert not square.is_identity_acting(state)
        image, _ = square.act(state, (0, 0, 0))
        assert image == (0, 1, 0)

    def test_alphabet_mismatch(self):
        with pytest.raises(InvalidElement):
            product_machine(self.odometer, TailMachine.odometer(3), [(1, 1)])

    def test_identity_acting_states(self):
        # state 2 moves only after reading a letter, so it is not identity-acting
        machine = TailMachine.from_rows(
            [[0, 0], [1, 1], [0, 3], [3, 3]],
            [[0, 1], [0, 1], [0, 1], [1, 0]],
        )
        assert machine.identity_acting_states() == {0, 1}

    def test_minimize_merges_duplicate_identity(self):
        union, offsets = disjoint_union([TailMachine.trivial(2), self.odometer])
        assert offsets == [0, 1]
        assert union.states == 3
        minimal, mapping = union.minimize()
        assert minimal.states == 2
        assert mapping[0] == mapping[1] == minimal.identity
        assert mapping[2] != minimal.identity

    def test_trim_drops_unreachable_states(self):
        machine = TailMachine.from_rows(
            [[0, 0], [0, 1], [0, 0]],
            [[0, 1], [1, 0], [1, 0]],
        )
        trimmed, mapping = machine.trim([1])
        assert trimmed.states == 2
        assert mapping == {0: 0, 1: 1}

    def test_reachable_order(self):
        assert self.odometer.reachable([1]) == [1, 0]
