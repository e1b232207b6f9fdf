"""
Exhaustive subgroup enumeration for small symmetric groups.

Elements of Sym(n) are numbered once and multiplied through a table; a
subgroup is an integer bitmask over those numbers.  Every subgroup is a join
of cyclic subgroups, so starting from the trivial group we join conjugacy
class representatives with every cyclic subgroup and register each new
class in full.  This keeps the number of closures proportional to the number
of classes rather than the number of subgroups.
"""

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import config
from ..exceptions import DegreeTooLarge
from .group import PermGroup
from .permutation import Permutation

logger = logging.getLogger(__name__)


class _SymmetricTable:
    """Sym(n) with numbered elements and a multiplication table."""

    def __init__(self, degree: int):
        self.degree = degree
        self.elements: List[Tuple[int, ...]] = list(itertools.permutations(range(degree)))
        self.index: Dict[Tuple[int, ...], int] = {e: i for i, e in enumerate(self.elements)}
        # table[i][j] = index of elements[i] ∘ elements[j]
        self.table = [
            [self.index[tuple(a[x] for x in b)] for b in self.elements]
            for a in self.elements
        ]
        self.inverse = [0] * len(self.elements)
        for i, element in enumerate(self.elements):
            inv = [0] * degree
            for point, image in enumerate(element):
                inv[image] = point
            self.inverse[i] = self.index[tuple(inv)]
        self.identity = self.index[tuple(range(degree))]

    def closure(self, generators: Sequence[int]) -> int:
        """Bitmask of the subgroup generated by the given element numbers."""
        mask = 1 << self.identity
        frontier = [self.identity]
        table = self.table
        while frontier:
            next_frontier = []
            for element in frontier:
                row = table[element]
                for gen in generators:
                    product = row[gen]
                    bit = 1 << product
                    if not mask & bit:
                        mask |= bit
                        next_frontier.append(product)
            frontier = next_frontier
        return mask

    def members(self, mask: int) -> List[int]:
        return [i for i in range(len(self.elements)) if mask >> i & 1]

    def conjugate(self, mask: int, by: int) -> int:
        inverse = self.inverse[by]
        result = 0
        for element in self.members(mask):
            result |= 1 << self.table[self.table[by][element]][inverse]
        return result

    def generators_of(self, mask: int) -> List[int]:
        """A small generating set found greedily in element order."""
        gens: List[int] = []
        current = 1 << self.identity
        for element in self.members(mask):
            if not current >> element & 1:
                gens.append(element)
                current = self.closure(gens)
                if current == mask:
                    break
        return gens


def enumerate_subgroup_masks(degree: int) -> Tuple[_SymmetricTable, List[int]]:
    """All subgroups of Sym(degree) as bitmasks, sorted by (order, mask)."""
    table = _SymmetricTable(degree)
    cyclic = sorted({table.closure([e]) for e in range(len(table.elements))})
    cyclic_gens = {mask: table.generators_of(mask) for mask in cyclic}

    known = set()
    representatives = []

    def register(mask: int):
        representatives.append(mask)
        for by in range(len(table.elements)):
            known.add(table.conjugate(mask, by))

    trivial = 1 << table.identity
    register(trivial)
    position = 0
    while position < len(representatives):
        rep = representatives[position]
        position += 1
        rep_gens = table.generators_of(rep)
        for cyc in cyclic:
            if cyc & rep == cyc:
                continue
            joined = table.closure(rep_gens + cyclic_gens[cyc])
            if joined not in known:
                register(joined)

    logger.info("Sym(%d): %d subgroup classes, %d subgroups",
                degree, len(representatives), len(known))
    return table, sorted(known, key=lambda m: (bin(m).count('1'), m))


def enumerate_subgroups_small(degree: int, cap: Optional[int] = None) -> List[PermGroup]:
    """Every subgroup of Sym(degree), each exactly once."""
    cap = cap or config.subgroup_degree_cap
    if degree < 1 or degree > cap:
        raise DegreeTooLarge(f"Subgroup enumeration supports 1 <= n <= {cap}, got {degree}")

    table, masks = enumerate_subgroup_masks(degree)
    groups = []
    for mask in masks:
        gens = table.generators_of(mask) or [table.identity]
        groups.append(PermGroup([Permutation(table.elements[g]) for g in gens]))
    return groups
