"""
Invertible Mealy machines acting on words over {0, ..., d-1}.

A state q reads a letter i, writes ``output[q][i]`` and moves to
``delta[q][i]``.  Every output row is a permutation, so every state acts as
an automorphism of the d-ary tree; the distinguished identity state writes
its input and stays put.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from ..exceptions import InvalidElement

logger = logging.getLogger(__name__)

Row = Tuple[int, ...]


@dataclass(frozen=True)
class TailMachine:
    degree: int
    delta: Tuple[Row, ...]
    output: Tuple[Row, ...]
    identity: int = 0

    def __post_init__(self):
        d = self.degree
        if d < 2:
            raise InvalidElement(f"Machine alphabet must have at least 2 letters, got {d}")
        if len(self.delta) != len(self.output) or not self.delta:
            raise InvalidElement("delta and output must have one row per state")
        states = len(self.delta)
        for q in range(states):
            if len(self.delta[q]) != d or len(self.output[q]) != d:
                raise InvalidElement(f"State {q} needs {d} transitions")
            if any(not 0 <= t < states for t in self.delta[q]):
                raise InvalidElement(f"State {q} has a transition outside 0..{states - 1}")
            if sorted(self.output[q]) != list(range(d)):
                raise InvalidElement(f"Output row of state {q} is not a permutation: {self.output[q]}")
        if not 0 <= self.identity < states:
            raise InvalidElement(f"Identity state {self.identity} does not exist")
        e = self.identity
        if self.output[e] != tuple(range(d)) or any(t != e for t in self.delta[e]):
            raise InvalidElement(f"State {e} does not act as the identity")

    @classmethod
    def trivial(cls, degree: int) -> 'TailMachine':
        return cls(degree, (tuple([0] * degree),), (tuple(range(degree)),), 0)

    @classmethod
    def odometer(cls, degree: int) -> 'TailMachine':
        """
        States: 0 identity, 1 adding one to the first digit with carry.

        The end 0^∞ ... is mapped to 1 0^∞ and (d-1)^∞ to 0^∞, so no end is fixed.
        """
        carry = tuple(1 if i == degree - 1 else 0 for i in range(degree))
        return cls(
            degree,
            (tuple([0] * degree), carry),
            (tuple(range(degree)), tuple((i + 1) % degree for i in range(degree))),
            0,
        )

    @classmethod
    def from_rows(cls, delta: Sequence[Sequence[int]], output: Sequence[Sequence[int]],
                  identity: int = 0) -> 'TailMachine':
        if not output:
            raise InvalidElement("A machine needs at least one state")
        return cls(len(output[0]), tuple(tuple(r) for r in delta),
                   tuple(tuple(r) for r in output), identity)

    @property
    def states(self) -> int:
        return len(self.delta)

    def act(self, state: int, word: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """Image of a finite word and the state reached after reading it."""
        image = []
        for letter in word:
            image.append(self.output[state][letter])
            state = self.delta[state][letter]
        return tuple(image), state

    def reachable(self, roots: Iterable[int]) -> List[int]:
        """States reachable from ``roots`` in breadth-first discovery order."""
        order: List[int] = []
        seen: Set[int] = set()
        queue = deque()
        for root in roots:
            if root not in seen:
                seen.add(root)
                queue.append(root)
                order.append(root)
            while queue:
                q = queue.popleft()
                for t in self.delta[q]:
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
                        order.append(t)
        return order

    def identity_acting_states(self) -> Set[int]:
        """States all of whose descendants write their input unchanged."""
        plain = tuple(range(self.degree))
        predecessors: Dict[int, Set[int]] = {q: set() for q in range(self.states)}
        for q in range(self.states):
            for t in self.delta[q]:
                predecessors[t].add(q)
        moving = {q for q in range(self.states) if self.output[q] != plain}
        queue = deque(moving)
        while queue:
            q = queue.popleft()
            for p in predecessors[q]:
                if p not in moving:
                    moving.add(p)
                    queue.append(p)
        return set(range(self.states)) - moving

    def is_identity_acting(self, state: int) -> bool:
        return state in self.identity_acting_states()

    def find_state(self, output_row: Sequence[int], delta_row: Sequence[int]) -> Optional[int]:
        target_out, target_delta = tuple(output_row), tuple(delta_row)
        for q in range(self.states):
            if self.output[q] == target_out and self.delta[q] == target_delta:
                return q
        return None

    def equivalence_classes(self) -> List[int]:
        """Moore partition refinement; returns a class label per state."""
        labels = _relabel([self.output[q] for q in range(self.states)])
        while True:
            keys = [(labels[q], tuple(labels[t] for t in self.delta[q])) for q in range(self.states)]
            refined = _relabel(keys)
            if len(set(refined)) == len(set(labels)):
                return refined
            labels = refined

    def minimize(self) -> Tuple['TailMachine', List[int]]:
        """
        Merge behaviourally equivalent states.

        Returns the minimal machine and the map from old to new state numbers.
        Classes are numbered by their smallest member.
        """
        classes = self.equivalence_classes()
        first_member: Dict[int, int] = {}
        for q, c in enumerate(classes):
            first_member.setdefault(c, q)
        ordered = sorted(first_member.values())
        number = {classes[q]: i for i, q in enumerate(ordered)}
        mapping = [number[classes[q]] for q in range(self.states)]
        delta = tuple(tuple(mapping[t] for t in self.delta[q]) for q in ordered)
        output = tuple(self.output[q] for q in ordered)
        minimal = TailMachine(self.degree, delta, output, mapping[self.identity])
        if minimal.states < self.states:
            logger.debug("Minimized machine: %d -> %d states", self.states, minimal.states)
        return minimal, mapping

    def trim(self, roots: Iterable[int]) -> Tuple['TailMachine', Dict[int, int]]:
        """
        Keep the identity state and everything reachable from ``roots``.

        States are renumbered in breadth-first order, identity first.
        """
        order = self.reachable([self.identity, *roots])
        mapping = {q: i for i, q in enumerate(order)}
        delta = tuple(tuple(mapping[t] for t in self.delta[q]) for q in order)
        output = tuple(self.output[q] for q in order)
        return TailMachine(self.degree, delta, output, 0), mapping

    def inverse(self) -> 'TailMachine':
        """State q of the result acts as the inverse of state q of self."""
        delta, output = [], []
        for q in range(self.states):
            inv_out = [0] * self.degree
            inv_delta = [0] * self.degree
            for letter in range(self.degree):
                written = self.output[q][letter]
                inv_out[written] = letter
                inv_delta[written] = self.delta[q][letter]
            delta.append(tuple(inv_delta))
            output.append(tuple(inv_out))
        return TailMachine(self.degree, tuple(delta), tuple(output), self.identity)

    def to_dict(self) -> dict:
        return {
            'states': list(range(self.states)),
            'delta': [list(row) for row in self.delta],
            'lambda': [list(row) for row in self.output],
            'id': self.identity,
        }


def _relabel(keys: Sequence[Hashable]) -> List[int]:
    numbers: Dict[Hashable, int] = {}
    return [numbers.setdefault(key, len(numbers)) for key in keys]


def _crawl(degree: int, initial: Sequence[Hashable],
           follow: Callable[[Hashable, int], Tuple[int, Hashable]],
           ) -> Tuple[TailMachine, Dict[Hashable, int]]:
    """
    Build a machine by exploring states from ``initial``.

    ``follow(state, letter)`` returns (written letter, next state).  The first
    initial state must act as the identity.
    """
    number: Dict[Hashable, int] = {}
    pending: List[Hashable] = []
    for state in initial:
        if state not in number:
            number[state] = len(number)
            pending.append(state)

    delta: List[Row] = []
    output: List[Row] = []
    position = 0
    while position < len(pending):
        state = pending[position]
        position += 1
        out_row, delta_row = [], []
        for letter in range(degree):
            written, target = follow(state, letter)
            if target not in number:
                number[target] = len(number)
                pending.append(target)
            out_row.append(written)
            delta_row.append(number[target])
        output.append(tuple(out_row))
        delta.append(tuple(delta_row))
    return TailMachine(degree, tuple(delta), tuple(output), 0), number


def product_machine(left: TailMachine, right: TailMachine,
                    starts: Iterable[Tuple[int, int]]) -> Tuple[TailMachine, Dict[Tuple[int, int], int]]:
    """
    Machine whose state (p, q) acts as p ∘ q (q first) on the reachable pairs.

    Returns the machine and the numbering of the pairs.
    """
    if left.degree != right.degree:
        raise InvalidElement(f"Alphabets differ: {left.degree} and {right.degree}")

    def follow(pair, letter):
        p, q = pair
        middle = right.output[q][letter]
        return left.output[p][middle], (left.delta[p][middle], right.delta[q][letter])

    initial = [(left.identity, right.identity), *starts]
    return _crawl(left.degree, initial, follow)


def disjoint_union(machines: Sequence[TailMachine]) -> Tuple[TailMachine, List[int]]:
    """
    Place several machines side by side; returns the union and each offset.

    The identity of the first machine becomes the identity of the union.
    """
    if not machines:
        raise InvalidElement("Nothing to combine")
    degree = machines[0].degree
    delta: List[Row] = []
    output: List[Row] = []
    offsets = []
    for machine in machines:
        if machine.degree != degree:
            raise InvalidElement(f"Alphabets differ: {degree} and {machine.degree}")
        offset = len(delta)
        offsets.append(offset)
        delta.extend(tuple(t + offset for t in row) for row in machine.delta)
        output.extend(machine.output)
    return TailMachine(degree, tuple(delta), tuple(output), machines[0].identity), offsets


def machine_minimize(machine: TailMachine) -> Tuple[TailMachine, List[int]]:
    return machine.minimize()
