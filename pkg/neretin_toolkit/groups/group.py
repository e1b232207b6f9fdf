"""
Permutation groups held as generators plus a base and strong generating set.

The stabilizer chain, membership tests, block computations and backtrack
searches are delegated to ``sympy.combinatorics``; this module fixes the
toolkit's conventions on top of it (left action, immutable values, exact
integer orders, explicit budgets).
"""

import itertools
import logging
from dataclasses import dataclass
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import PermutationGroup as SympyPermutationGroup

from ..config import config
from ..exceptions import (
    DegreeMismatch, NotSubgroup, NotTransitive, ResourceExhausted, TupleArityTooLarge,
)
from .permutation import Permutation

logger = logging.getLogger(__name__)


class PermGroup:
    """
    A finite permutation group of a fixed degree.

    Built once through ``bsgs_build``; afterwards only read-only queries are
    offered, so a group may be shared between threads.
    """

    def __init__(self, generators: Sequence[Permutation]):
        if not generators:
            raise DegreeMismatch("A permutation group needs at least one generator")
        degree = generators[0].degree
        for gen in generators:
            if gen.degree != degree:
                raise DegreeMismatch(
                    f"Generator {gen} has degree {gen.degree}, expected {degree}")
        self._degree = degree
        self._generators = tuple(generators)
        self._group = SympyPermutationGroup([g.to_sympy() for g in generators])
        self._group.schreier_sims()
        self._order = int(self._group.order())

    @classmethod
    def from_sympy(cls, group: SympyPermutationGroup) -> 'PermGroup':
        gens = [Permutation.from_sympy(g) for g in group.generators]
        return cls(gens or [Permutation.identity(group.degree)])

    @classmethod
    def trivial(cls, degree: int) -> 'PermGroup':
        return cls([Permutation.identity(degree)])

    @classmethod
    def symmetric(cls, degree: int, points: Optional[Sequence[int]] = None) -> 'PermGroup':
        """Full symmetric group on ``points`` (default: all points) inside Sym(degree)."""
        pts = sorted(points) if points is not None else list(range(degree))
        if len(pts) < 2:
            return cls.trivial(degree)
        gens = [Permutation.from_cycles([pts[:2]], degree)]
        if len(pts) > 2:
            gens.append(Permutation.from_cycles([pts], degree))
        return cls(gens)

    @classmethod
    def alternating(cls, degree: int, points: Optional[Sequence[int]] = None) -> 'PermGroup':
        """Alternating group on ``points`` generated by the 3-cycles (a b x)."""
        pts = sorted(points) if points is not None else list(range(degree))
        if len(pts) < 3:
            return cls.trivial(degree)
        a, b = pts[0], pts[1]
        return cls([Permutation.from_cycles([(a, b, x)], degree) for x in pts[2:]])

    @classmethod
    def point_stabilizer(cls, degree: int, point: int) -> 'PermGroup':
        return cls.symmetric(degree, [x for x in range(degree) if x != point])

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> Tuple[Permutation, ...]:
        return self._generators

    @property
    def order(self) -> int:
        return self._order

    @property
    def base(self) -> List[int]:
        return list(self._group.base)

    @property
    def strong_generators(self) -> List[Permutation]:
        return [Permutation.from_sympy(g) for g in self._group.strong_gens]

    @property
    def basic_orbit_sizes(self) -> List[int]:
        return [len(orbit) for orbit in self._group.basic_orbits]

    @property
    def sympy_group(self) -> SympyPermutationGroup:
        return self._group

    def contains(self, perm: Permutation) -> bool:
        """Membership test by sifting through the stabilizer chain."""
        if perm.degree != self._degree:
            raise DegreeMismatch(f"Cannot test degree {perm.degree} in degree {self._degree}")
        return bool(self._group.contains(perm.to_sympy(), strict=True))

    def __contains__(self, perm: Permutation) -> bool:
        return self.contains(perm)

    def is_subgroup_of(self, other: 'PermGroup') -> bool:
        return all(other.contains(g) for g in self._generators)

    def same_group(self, other: 'PermGroup') -> bool:
        return self._order == other.order and self.is_subgroup_of(other)

    def is_transitive(self) -> bool:
        return bool(self._group.is_transitive())

    def orbits(self) -> List[Tuple[int, ...]]:
        return sorted(tuple(sorted(orbit)) for orbit in self._group.orbits())

    def fixed_points(self) -> List[int]:
        return [x for x in range(self._degree) if all(g.fixes(x) for g in self._generators)]

    def stabilizer(self, point: int) -> 'PermGroup':
        return PermGroup.from_sympy(self._group.stabilizer(point))

    def elements(self):
        """Iterate over all elements (only sensible for small orders)."""
        for perm in self._group.generate():
            yield Permutation.from_sympy(perm)

    def __repr__(self) -> str:
        gens = ', '.join(str(g) for g in self._generators)
        return f"PermGroup(degree={self._degree}, order={self._order}, gens=[{gens}])"


@dataclass(frozen=True)
class TupleOrbit:
    representative: Tuple[int, ...]
    size: int


@dataclass(frozen=True)
class BlockSystem:
    """A partition of {0, ..., degree-1} into cells of equal size."""

    degree: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        points = sorted(p for block in self.blocks for p in block)
        if points != list(range(self.degree)):
            raise ValueError("Blocks must partition the domain")
        if len({len(block) for block in self.blocks}) != 1:
            raise ValueError("Blocks must have equal sizes")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> 'BlockSystem':
        cells: Dict[int, List[int]] = {}
        for point, label in enumerate(labels):
            cells.setdefault(label, []).append(point)
        return cls(len(labels), tuple(sorted(tuple(cell) for cell in cells.values())))

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    def is_trivial(self) -> bool:
        return self.block_size in (1, self.degree)

    def refines(self, other: 'BlockSystem') -> bool:
        """True when every cell of self lies inside a cell of other."""
        owner = {p: i for i, block in enumerate(other.blocks) for p in block}
        return all(len({owner[p] for p in block}) == 1 for block in self.blocks)


class _BudgetedPredicate:
    """Wrap a search predicate so that a runaway backtrack aborts cleanly."""

    def __init__(self, predicate: Callable, budget: int, what: str):
        self.predicate = predicate
        self.budget = budget
        self.what = what
        self.calls = 0

    def __call__(self, element) -> bool:
        self.calls += 1
        if self.calls > self.budget:
            raise ResourceExhausted(
                f"{self.what}: backtrack search exceeded {self.budget} nodes")
        return self.predicate(element)


def bsgs_build(generators: Sequence[Permutation]) -> PermGroup:
    group = PermGroup(generators)
    logger.debug("Built BSGS: degree %d, base %s, order %d", group.degree, group.base, group.order)
    return group


def _check_degrees(a: PermGroup, b: PermGroup):
    if a.degree != b.degree:
        raise DegreeMismatch(f"Groups have degrees {a.degree} and {b.degree}")


def orbits_on_tuples(group: PermGroup, t: int) -> List[TupleOrbit]:
    """
    Orbits on ordered t-tuples of distinct points.

    The group is t-transitive exactly when a single orbit is returned.
    """
    if t < 1 or t > group.degree:
        raise TupleArityTooLarge(f"Tuple arity {t} not in 1..{group.degree}")

    seen = set()
    result = []
    for candidate in itertools.permutations(range(group.degree), t):
        if candidate in seen:
            continue
        if t == 1:
            # sympy's tuple action cannot start from a 1-tuple
            orbit = {(point,) for point in group.sympy_group.orbit(candidate[0])}
        else:
            orbit = {tuple(item) for item in group.sympy_group.orbit(candidate, action='tuples')}
        seen.update(orbit)
        result.append(TupleOrbit(candidate, len(orbit)))
    return result


def is_block_system(group: PermGroup, partition: Sequence[Sequence[int]]) -> bool:
    """Whether the partition is invariant under every generator."""
    owner = {}
    for index, cell in enumerate(partition):
        for point in cell:
            owner[point] = index
    if sorted(owner) != list(range(group.degree)):
        return False
    for gen in group.generators:
        for cell in partition:
            if len({owner[gen(point)] for point in cell}) != 1:
                return False
    return True


def minimal_blocks(group: PermGroup) -> List[BlockSystem]:
    """
    All minimal nontrivial block systems of a transitive group.

    The block containing 0 of any system is the minimal block generated by
    {0, x} for some x, and x may be taken from the orbits of the stabilizer
    of 0.  An empty list means the group is primitive.
    """
    if not group.is_transitive():
        raise NotTransitive(f"Group of degree {group.degree} is not transitive")
    if group.degree <= 2:
        return []

    stab = group.sympy_group.stabilizer(0)
    candidates: List[BlockSystem] = []
    for orbit in stab.orbits():
        x = min(orbit)
        if x == 0:
            continue
        labels = group.sympy_group.minimal_block([0, x])
        system = BlockSystem.from_labels(labels)
        if system.is_trivial() or system in candidates:
            continue
        candidates.append(system)

    return sorted(
        (s for s in candidates
         if not any(o != s and o.refines(s) for o in candidates)),
        key=lambda s: (s.block_size, s.blocks))


def is_primitive(group: PermGroup) -> bool:
    return not minimal_blocks(group)


def subgroup_intersection(a: PermGroup, b: PermGroup, budget: Optional[int] = None) -> PermGroup:
    """Exact A ∩ B by a backtrack search over the smaller group."""
    _check_degrees(a, b)
    if a.is_subgroup_of(b):
        return a
    if b.is_subgroup_of(a):
        return b
    outer, inner = (a, b) if a.order <= b.order else (b, a)
    budget = budget or config.search_node_budget

    predicate = _BudgetedPredicate(
        lambda element: inner.sympy_group.contains(element, strict=True),
        budget, 'subgroup intersection')
    found = outer.sympy_group.subgroup_search(predicate)
    logger.debug("Intersection search used %d nodes", predicate.calls)
    return PermGroup.from_sympy(found)


def normalizer(group: PermGroup, sub: PermGroup, budget: Optional[int] = None) -> PermGroup:
    """N_G(H) for H ≤ G by a backtrack search seeded with H itself."""
    _check_degrees(group, sub)
    if not sub.is_subgroup_of(group):
        raise NotSubgroup("Second group is not a subgroup of the first")
    if sub.same_group(group):
        return group
    budget = budget or config.search_node_budget

    sub_gens = [g.to_sympy() for g in sub.generators]
    sub_group = sub.sympy_group

    def normalizes(element) -> bool:
        inverse = ~element
        # sympy multiplies left to right, so this is element^-1 h element
        return all(sub_group.contains(inverse * h * element, strict=True) for h in sub_gens)

    predicate = _BudgetedPredicate(normalizes, budget, 'normalizer')
    found = group.sympy_group.subgroup_search(predicate, init_subgroup=sub_group)
    logger.debug("Normalizer search used %d nodes", predicate.calls)
    return PermGroup.from_sympy(found)


def _coset_orbit_is_everything(acting: PermGroup, sub: PermGroup) -> bool:
    """Whether ``acting`` is transitive on the left cosets g·sub of Sym(n)."""
    index = factorial(sub.degree) // sub.order
    representatives = [Permutation.identity(sub.degree)]
    inverses = [representatives[0]]
    frontier = [representatives[0]]
    while frontier:
        next_frontier = []
        for rep in frontier:
            for gen in acting.generators:
                moved = gen.compose(rep)
                if any(sub.contains(inv.compose(moved)) for inv in inverses):
                    continue
                representatives.append(moved)
                inverses.append(moved.inverse())
                next_frontier.append(moved)
        frontier = next_frontier
    return len(representatives) == index


def product_covers(a: PermGroup, b: PermGroup, budget: Optional[int] = None) -> bool:
    """
    Whether Sym(n) = AB as a set.

    Uses |AB| = |A||B|/|A∩B| in general; when one factor has small index the
    equivalent test "the other factor is transitive on its cosets" is used.
    """
    _check_degrees(a, b)
    total = factorial(a.degree)
    if a.order * b.order < total:
        return False
    threshold = config.coset_index_threshold
    if total // b.order <= threshold:
        return _coset_orbit_is_everything(a, b)
    if total // a.order <= threshold:
        # Sym = AB iff Sym = BA, by inversion
        return _coset_orbit_is_everything(b, a)
    return product_set_size(a, b, budget=budget) == total


def product_set_size(a: PermGroup, b: PermGroup, budget: Optional[int] = None) -> int:
    """|AB| = |A|·|B| / |A ∩ B|."""
    meet = subgroup_intersection(a, b, budget=budget)
    return a.order * b.order // meet.order
