"""
Factorizations of finite symmetric groups.

Jordan's prime-cycle criterion, the alternating-group recognition used by the
factorization dichotomy (a subgroup B with Sym(n) = AB, A transitive and
imprimitive, either contains Alt(n) or fixes a point x and contains
Alt(n - {x})), and the prime-interval hypothesis behind it.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor, lcm
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from sympy import isprime, primerange

from ..config import config
from ..exceptions import NoWitness, NotTransitive, OmegaTooSmall
from .group import PermGroup, minimal_blocks
from .permutation import Permutation

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

CONTAINS_ALT = 'ContainsAlt'
FIXES_POINT = 'FixesPointWithAltComplement'
NEITHER = 'Neither'


@dataclass(frozen=True)
class FactorizationVerdict:
    tag: str
    point: Optional[int] = None

    def to_dict(self) -> dict:
        data = {'verdict': self.tag}
        if self.point is not None:
            data['point'] = self.point
        return data


@dataclass(frozen=True)
class JordanReport:
    primitive: bool
    prime_cycle_witness: Optional[Tuple[int, Permutation]]
    jordan_applies: bool
    contains_alt: bool

    @property
    def violates_theorem(self) -> bool:
        return self.jordan_applies and not self.contains_alt

    def to_dict(self) -> dict:
        witness = None
        if self.prime_cycle_witness is not None:
            p, element = self.prime_cycle_witness
            witness = {'p': p, 'element': element.to_cycle_string()}
        return {
            'primitive': self.primitive,
            'prime_cycle_witness': witness,
            'jordan_applies': self.jordan_applies,
            'contains_alt': self.contains_alt,
        }


@dataclass(frozen=True)
class AltWitness:
    omega: Tuple[int, ...]
    alpha: Permutation
    beta: Permutation
    primes: Tuple[int, int]
    contains_alt: bool

    @property
    def large_enough(self) -> bool:
        degree = self.alpha.degree
        return 2 * len(self.omega) >= degree + 8


@dataclass
class OrbitClaim:
    orbit_sizes: List[int] = field(default_factory=list)
    at_most_two_orbits: bool = False
    large_orbit: bool = False


def primes_in_interval(lo: Number, hi: Number) -> List[int]:
    """All primes p with lo <= p <= hi, ascending (exact rational bounds)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo < 0 or hi < lo:
        return []
    return [int(p) for p in primerange(max(2, ceil(lo)), floor(hi) + 1)]


def prime_count_half_interval(n: int, closed: bool = True) -> int:
    """Number of primes in [n/2, n] (or in [n/2, n) when ``closed`` is false)."""
    primes = primes_in_interval(Fraction(n, 2), n)
    if not closed:
        primes = [p for p in primes if p < n]
    return len(primes)


def first_degree_with_prime_count(count: int = 3, closed: bool = True, limit: int = 10_000) -> int:
    """Smallest n such that [n/2, n] contains at least ``count`` primes."""
    for n in range(1, limit + 1):
        if prime_count_half_interval(n, closed=closed) >= count:
            return n
    raise NoWitness(f"No degree up to {limit} has {count} primes in [n/2, n]")


def three_cycle(a: int, b: int, x: int, degree: int) -> Permutation:
    return Permutation.from_cycles([(a, b, x)], degree)


def _contains_alt(group: PermGroup, omega: Sequence[int]) -> bool:
    points = sorted(set(omega))
    if len(points) < 3:
        # Alt on fewer than three points is trivial
        return True
    a, b = points[0], points[1]
    return all(group.contains(three_cycle(a, b, x, group.degree)) for x in points[2:])


def contains_alt_on(group: PermGroup, omega: Sequence[int]) -> bool:
    """Whether Alt(Ω) ≤ B, checked on the generating 3-cycles (a b x)."""
    points = sorted(set(omega))
    if len(points) < 3:
        raise OmegaTooSmall(f"Need at least 3 points, got {points}")
    if points[0] < 0 or points[-1] >= group.degree:
        raise OmegaTooSmall(f"Points {points} not inside degree {group.degree}")
    return _contains_alt(group, points)


def prime_cycle_power(element: Permutation, max_prime: int) -> Optional[Tuple[int, Permutation]]:
    """
    A power of ``element`` that is a single p-cycle with p prime <= max_prime.

    If some cycle has prime length p and no other cycle length is divisible by
    p, raising to the lcm of the other lengths kills them and keeps the p-cycle.
    """
    lengths = element.cycle_lengths()
    for length in sorted(set(lengths)):
        if length > max_prime or not isprime(length):
            continue
        if sum(1 for other in lengths if other % length == 0) != 1:
            continue
        exponent = lcm(*(other for other in lengths if other != length))
        return length, element.power(exponent)
    return None


def random_elements(group: PermGroup, rng: random.Random, count: int) -> Iterator[Permutation]:
    """Seeded random products of generators and their inverses."""
    letters = list(group.generators) + [g.inverse() for g in group.generators]
    length = 4 * group.degree + 10
    current = Permutation.identity(group.degree)
    for _ in range(count):
        for _ in range(length):
            current = current.compose(rng.choice(letters))
        yield current


def _candidate_elements(group: PermGroup, budget: int, seed: int,
                        exhaustive_threshold: int) -> Iterator[Permutation]:
    yield from group.generators
    yield from group.strong_generators
    if group.order <= budget:
        yield from group.elements()
        return
    yield from random_elements(group, random.Random(seed), budget)
    if group.order <= exhaustive_threshold:
        yield from group.elements()


def jordan_check(group: PermGroup, budget: Optional[int] = None, seed: Optional[int] = None,
                 exhaustive_threshold: Optional[int] = None) -> JordanReport:
    """
    Evaluate Jordan's theorem on a transitive group.

    The prime-cycle witness is searched among generators and strong generators,
    then over all elements when the order is within the random budget, else
    over seeded random products followed by an exhaustive scan below the
    exhaustive threshold.
    """
    if not group.is_transitive():
        raise NotTransitive(f"Group {group!r} is not transitive")
    budget = budget or config.random_budget
    seed = config.seed if seed is None else seed
    exhaustive_threshold = exhaustive_threshold or config.exhaustive_threshold

    primitive = not minimal_blocks(group)
    witness = None
    max_prime = group.degree - 3
    if max_prime >= 2:
        for element in _candidate_elements(group, budget, seed, exhaustive_threshold):
            witness = prime_cycle_power(element, max_prime)
            if witness is not None:
                break

    contains_alt = _contains_alt(group, range(group.degree))
    report = JordanReport(
        primitive=primitive,
        prime_cycle_witness=witness,
        jordan_applies=primitive and witness is not None,
        contains_alt=contains_alt,
    )
    if report.violates_theorem:
        logger.error("Jordan check violated for %r", group)
    return report


def alt_complement_points(group: PermGroup) -> List[int]:
    """Fixed points x of B with Alt(n - {x}) <= B."""
    domain = list(range(group.degree))
    return [point for point in group.fixed_points()
            if _contains_alt(group, [x for x in domain if x != point])]


def classify_factorization(group: PermGroup) -> FactorizationVerdict:
    """ContainsAlt, else FixesPointWithAltComplement(smallest such x), else Neither."""
    if _contains_alt(group, range(group.degree)):
        return FactorizationVerdict(CONTAINS_ALT)
    points = alt_complement_points(group)
    if points:
        return FactorizationVerdict(FIXES_POINT, points[0])
    return FactorizationVerdict(NEITHER)


def alt_omega_witness(group: PermGroup, budget: Optional[int] = None,
                      seed: Optional[int] = None) -> AltWitness:
    """
    Find a p-cycle and a q-cycle in B for primes p < q in [(n+1)/2, n].

    Their supports meet (p + q > n), so they generate a primitive group on
    the union Ω, which contains Alt(Ω) by Jordan's theorem.
    """
    degree = group.degree
    primes = primes_in_interval(Fraction(degree + 1, 2), degree)
    if len(primes) < 2:
        raise NoWitness(f"[(n+1)/2, n] holds fewer than two primes for n={degree}")
    budget = budget or config.random_budget
    seed = config.seed if seed is None else seed

    found = {}
    for element in _candidate_elements(group, budget, seed, config.exhaustive_threshold):
        order = element.order()
        for p in primes:
            if p in found or order % p:
                continue
            # p > n/2: exactly one cycle of length p, so this power is a p-cycle
            found[p] = element.power(order // p)
        pair = _best_pair(found, primes)
        if pair is not None:
            break
    else:
        pair = _best_pair(found, primes)

    if pair is None:
        raise NoWitness(f"No two prime cycles found in group of order {group.order}")

    p, q = pair
    alpha, beta = found[p], found[q]
    omega = tuple(sorted(set(alpha.support()) | set(beta.support())))
    witness = AltWitness(omega, alpha, beta, (p, q), _contains_alt(group, omega))
    if not witness.contains_alt:
        logger.error("Alt(Ω) missing for Ω=%s in %r", omega, group)
    logger.info("Alt witness: p=%d, q=%d, |Ω|=%d", p, q, len(omega))
    return witness


def _best_pair(found: dict, primes: Sequence[int]) -> Optional[Tuple[int, int]]:
    available = [p for p in primes if p in found]
    if len(available) < 2:
        return None
    return available[-2], available[-1]


def factorization_orbit_claim(group: PermGroup) -> OrbitClaim:
    """B has at most two orbits, one of size >= n-1 (the first step of the dichotomy)."""
    sizes = sorted((len(orbit) for orbit in group.orbits()), reverse=True)
    return OrbitClaim(
        orbit_sizes=sizes,
        at_most_two_orbits=len(sizes) <= 2,
        large_orbit=sizes[0] >= group.degree - 1,
    )


def subset_orbit_transitive(group: PermGroup, size: int) -> bool:
    """Whether the group is transitive on the unordered subsets of the given size."""
    start = frozenset(range(size))
    seen = {start}
    frontier = [start]
    while frontier:
        next_frontier = []
        for subset in frontier:
            for gen in group.generators:
                image = frozenset(gen(x) for x in subset)
                if image not in seen:
                    seen.add(image)
                    next_frontier.append(image)
        frontier = next_frontier
    return len(seen) == comb(group.degree, size)

