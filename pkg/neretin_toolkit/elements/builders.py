"""
Constructors for frequently used almost automorphisms.
"""

import logging
import random
from typing import Iterable, Mapping, Sequence, Tuple, Union

from ..exceptions import InvalidElement
from ..groups.permutation import Permutation
from ..tree.addresses import (
    Address, LeafSet, Signature, ball_leafset, complete_clopen, expand_leaf, validate_address,
)
from .almost_auto import AlmostAuto, Piece, aa_compose
from .machine import TailMachine, disjoint_union

logger = logging.getLogger(__name__)

AddressLike = Union[Address, str]


def _addr(value: AddressLike) -> Address:
    return value if isinstance(value, Address) else Address.parse(value)


def identity(sig: Signature) -> AlmostAuto:
    machine = TailMachine.trivial(sig.d)
    return AlmostAuto(sig, tuple(Piece(leaf, leaf, 0) for leaf in LeafSet.base(sig)), machine)


def prefix_exchange(sig: Signature, mapping: Union[Mapping[AddressLike, AddressLike],
                                                   Iterable[Tuple[AddressLike, AddressLike]]]) -> AlmostAuto:
    """Leaf map with identity tails, e.g. {"0": "00", "10": "01", "11": "1"}."""
    pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
    pieces = tuple(Piece(_addr(source), _addr(target), 0) for source, target in pairs)
    return AlmostAuto(sig, pieces, TailMachine.trivial(sig.d))


def root_child_swap(sig: Signature, first: int = 0, second: int = 1) -> AlmostAuto:
    images = list(range(sig.k))
    images[first], images[second] = images[second], images[first]
    return prefix_exchange(sig, [(Address.of(i), Address.of(images[i])) for i in range(sig.k)])


def cylinder_swap(sig: Signature, a: AddressLike, b: AddressLike) -> AlmostAuto:
    """Exchange Cyl(a) and Cyl(b) and fix everything else; a and b must be incomparable."""
    a, b = _addr(a), _addr(b)
    if a.comparable(b):
        raise InvalidElement(f"Cylinders {a} and {b} overlap")
    frame = complete_clopen(sig, [a, b])
    swap = {a: b, b: a}
    return prefix_exchange(sig, [(leaf, swap.get(leaf, leaf)) for leaf in frame])


def cylinder_cycle(sig: Signature, cylinders: Sequence[AddressLike]) -> AlmostAuto:
    """Send the i-th cylinder to the (i+1)-th, cyclically; they must be pairwise incomparable."""
    cylinders = [_addr(c) for c in cylinders]
    frame = complete_clopen(sig, cylinders)
    shift = {c: cylinders[(i + 1) % len(cylinders)] for i, c in enumerate(cylinders)}
    return prefix_exchange(sig, [(leaf, shift.get(leaf, leaf)) for leaf in frame])


def vertex_permutation(sig: Signature, vertex: AddressLike, perm: Permutation) -> AlmostAuto:
    """Permute the children of ``vertex`` rigidly (the root permutes the k root children)."""
    vertex = _addr(vertex)
    validate_address(sig, vertex)
    arity = sig.arity(vertex.depth)
    if perm.degree != arity:
        raise InvalidElement(f"Vertex {vertex} has {arity} children, permutation has degree {perm.degree}")
    children = [vertex.child(i) for i in range(arity)]
    frame = complete_clopen(sig, children)
    moved = {vertex.child(i): vertex.child(perm(i)) for i in range(arity)}
    return prefix_exchange(sig, [(leaf, moved.get(leaf, leaf)) for leaf in frame])


def tree_automorphism(sig: Signature, root_perm: Permutation, states: Sequence[int],
                      machine: TailMachine) -> AlmostAuto:
    """Root child i goes to root child σ(i) with tail ``states[i]``."""
    if root_perm.degree != sig.k or len(states) != sig.k:
        raise InvalidElement(f"Need a permutation and a state for each of the {sig.k} root children")
    pieces = tuple(Piece(Address.of(i), Address.of(root_perm(i)), states[i]) for i in range(sig.k))
    return AlmostAuto(sig, pieces, machine)


def odometer_at(sig: Signature, leaf: AddressLike) -> AlmostAuto:
    """Identity outside Cyl(leaf), the d-ary odometer inside."""
    leaf = _addr(leaf)
    frame = complete_clopen(sig, [leaf])
    pieces = tuple(Piece(v, v, 1 if v == leaf else 0) for v in frame)
    return AlmostAuto(sig, pieces, TailMachine.odometer(sig.d))


def sampling_machine(degree: int) -> TailMachine:
    """Identity, odometer and inverse odometer, as states 0, 1 and 3."""
    odometer = TailMachine.odometer(degree)
    machine, _ = disjoint_union([odometer, odometer.inverse()])
    return machine


def random_leafset(sig: Signature, rng: random.Random, expansions: int) -> LeafSet:
    leaves = LeafSet.base(sig)
    for _ in range(expansions):
        leaves = expand_leaf(leaves, rng.choice(leaves.leaves))
    return leaves


def random_element(sig: Signature, rng: random.Random, expansions: int = 3,
                   tail_probability: float = 0.3) -> AlmostAuto:
    """
    A random tree-pair diagram with a random leaf bijection.

    Both leaf sets come from the same number of random expansions, so they
    have the same size; each leaf gets a non-identity tail with the given
    probability.
    """
    machine = sampling_machine(sig.d)
    dom = random_leafset(sig, rng, expansions)
    ran = list(random_leafset(sig, rng, expansions).leaves)
    rng.shuffle(ran)
    moving = [1, 3]
    pieces = tuple(
        Piece(source, target, rng.choice(moving) if rng.random() < tail_probability else 0)
        for source, target in zip(dom.leaves, ran))
    return AlmostAuto(sig, pieces, machine)


def random_thompson_f(sig: Signature, rng: random.Random, expansions: int = 3) -> AlmostAuto:
    """Order-preserving leaf map with identity tails."""
    dom = random_leafset(sig, rng, expansions)
    ran = random_leafset(sig, rng, expansions)
    return prefix_exchange(sig, list(zip(dom.leaves, ran.leaves)))


def random_level_element(sig: Signature, rng: random.Random, n: int,
                         tail_probability: float = 0.3) -> AlmostAuto:
    """A random element of O_n: a permutation of the depth-n cylinders with random tails."""
    machine = sampling_machine(sig.d)
    ball = list(ball_leafset(sig, n).leaves)
    images = ball[:]
    rng.shuffle(images)
    pieces = tuple(
        Piece(source, target, rng.choice([1, 3]) if rng.random() < tail_probability else 0)
        for source, target in zip(ball, images))
    return AlmostAuto(sig, pieces, machine)


def product_of(sig: Signature, elements: Iterable[AlmostAuto]) -> AlmostAuto:
    """g1 ∘ g2 ∘ ... ∘ gr (the last one is applied first)."""
    result = identity(sig)
    for element in elements:
        result = aa_compose(result, element)
    return result


def power(g: AlmostAuto, exponent: int) -> AlmostAuto:
    if exponent < 0:
        return power(g.inverse(), -exponent)
    result = identity(g.signature)
    for _ in range(exponent):
        result = aa_compose(g, result)
    return result
