"""
Permutations of {0, ..., n-1}.

Composition uses the left action convention: ``p.compose(q)`` maps x to
p(q(x)), so the right factor is applied first.  The same convention is used
by the almost automorphism calculus, so level quotients are homomorphisms
without any reversal.
"""

import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, List, Sequence, Tuple

from sympy.combinatorics import Permutation as SympyPermutation

from ..exceptions import CodecError, DegreeMismatch

_CYCLE_RE = re.compile(r'\(([^()]*)\)')


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., degree-1} stored as its image array."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if len(self.images) == 0:
            raise DegreeMismatch("Permutation degree must be positive")
        if sorted(self.images) != list(range(len(self.images))):
            raise CodecError(f"Not a permutation image array: {list(self.images)}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> 'Permutation':
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> 'Permutation':
        """Build a permutation from disjoint cycles given as point sequences."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for point in cycle:
                if not 0 <= point < degree:
                    raise CodecError(f"Point {point} outside degree {degree}")
                if point in seen:
                    raise CodecError(f"Point {point} appears in two cycles")
                seen.add(point)
            for position, point in enumerate(cycle):
                images[point] = cycle[(position + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> 'Permutation':
        """Parse cycle notation such as "(0 1 2)(3 4)"; "()" is the identity."""
        stripped = text.strip()
        if stripped in ('', '()', 'id'):
            return cls.identity(degree)
        if _CYCLE_RE.sub('', stripped).strip():
            raise CodecError(f"Malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            try:
                points = [int(token) for token in body.replace(',', ' ').split()]
            except ValueError as e:
                raise CodecError(f"Malformed cycle notation: {text!r}") from e
            if points:
                cycles.append(points)
        return cls.from_cycles(cycles, degree)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def compose(self, other: 'Permutation') -> 'Permutation':
        """Return self ∘ other (apply ``other`` first)."""
        if self.degree != other.degree:
            raise DegreeMismatch(f"Cannot compose degree {self.degree} with degree {other.degree}")
        return Permutation(tuple(self.images[x] for x in other.images))

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        return self.compose(other)

    def inverse(self) -> 'Permutation':
        inverse = [0] * self.degree
        for point, image in enumerate(self.images):
            inverse[image] = point
        return Permutation(tuple(inverse))

    def power(self, exponent: int) -> 'Permutation':
        if exponent < 0:
            return self.inverse().power(-exponent)
        result = Permutation.identity(self.degree)
        base = self
        while exponent:
            if exponent & 1:
                result = result.compose(base)
            base = base.compose(base)
            exponent >>= 1
        return result

    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, sorted."""
        seen = [False] * self.degree
        result = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen[point] = True
                point = self.images[point]
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def cycle_lengths(self) -> List[int]:
        return [len(cycle) for cycle in self.cycles()]

    def order(self) -> int:
        return lcm(*self.cycle_lengths()) if self.cycles() else 1

    def support(self) -> Tuple[int, ...]:
        return tuple(point for point, image in enumerate(self.images) if point != image)

    def fixes(self, point: int) -> bool:
        return self.images[point] == point

    def to_cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return '()'
        return ''.join('(' + ' '.join(str(p) for p in cycle) + ')' for cycle in cycles)

    def __str__(self) -> str:
        return self.to_cycle_string()

    def to_sympy(self) -> SympyPermutation:
        return SympyPermutation(list(self.images))

    @classmethod
    def from_sympy(cls, perm: SympyPermutation) -> 'Permutation':
        return cls(tuple(perm.array_form))


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Group law of Sym(n): x ↦ p(q(x))."""
    return p.compose(q)


def perm_inverse(p: Permutation) -> Permutation:
    return p.inverse()


def parse_generator_list(text: str, degree: int = 0) -> List[Permutation]:
    """
    Parse a comma separated list of cycle strings, e.g. "(0 1),(0 1 2 3)".

    When ``degree`` is 0 it is inferred as one more than the largest point.
    """
    chunks = [chunk for chunk in re.findall(r'(?:\([^()]*\))+|\bid\b', text)]
    if not chunks:
        raise CodecError(f"No permutations found in {text!r}")
    if degree <= 0:
        points = [int(token) for token in re.findall(r'\d+', text)]
        degree = max(points) + 1 if points else 1
    return [Permutation.parse(chunk, degree) for chunk in chunks]
