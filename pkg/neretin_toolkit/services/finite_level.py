"""
Finite level quotients O_n / U_n ≅ Sym(k_n) and the cocompactness certifier.

An element of O_n carries every depth-n cylinder onto a depth-n cylinder by
a tree isomorphism; its image in Sym(k_n) is the induced permutation of the
depth-n leaves, indexed lexicographically.  The certifier takes, for a
contiguous range of levels, generators of the finite images B_n of a closed
subgroup H and applies the factorization dichotomy level by level:

- B_n contains Alt(k_n) at every level: H is dense in O;
- B_n fixes a leaf and contains Alt of the rest at every level, with the
  fixed leaves forming a chain: H lies in an end stabilizer;
- anything else is reported as inconclusive at the first failing level.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import BadLevels, DegreeMismatch, NotInLevelSubgroup, ResourceExhausted
from ..elements.almost_auto import AlmostAuto, is_level_preserving, refine_domain
from ..elements.builders import cylinder_cycle, cylinder_swap, vertex_permutation
from ..groups.factorization import (
    CONTAINS_ALT, NEITHER, alt_complement_points, classify_factorization,
    prime_count_half_interval,
)
from ..groups.group import PermGroup, product_covers
from ..groups.permutation import Permutation
from ..tree.addresses import Address, Signature, ball_leafset, common_refinement

logger = logging.getLogger(__name__)

DENSE = 'Dense'
END_STABILIZER = 'EndStabilizer'
INCONCLUSIVE = 'Inconclusive'


@dataclass(frozen=True)
class LevelContext:
    signature: Signature
    n: int
    leaves: Tuple[Address, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise BadLevels(f"Level must be at least 1, got {self.n}")
        object.__setattr__(self, 'leaves', ball_leafset(self.signature, self.n).leaves)

    @property
    def k_n(self) -> int:
        return self.signature.k * self.signature.d ** (self.n - 1)

    def index(self, address: Address) -> int:
        if address.depth != self.n:
            raise BadLevels(f"{address} does not have depth {self.n}")
        return self.leaves.index(address)

    def leaf(self, index: int) -> Address:
        return self.leaves[index]


def level_quotient(g: AlmostAuto, ctx: LevelContext) -> Permutation:
    """The permutation of depth-n leaves induced by g ∈ O_n."""
    if g.signature != ctx.signature:
        raise NotInLevelSubgroup(f"{g.signature} does not match {ctx.signature}")
    if not is_level_preserving(g):
        raise NotInLevelSubgroup(f"{g} changes depths, so it is not in O")
    ball = ball_leafset(ctx.signature, ctx.n)
    fine = refine_domain(g, common_refinement(g.dom, ball))

    deepest = max(p.source.depth for p in fine.pieces)
    for m in range(ctx.n, deepest + 1):
        image_of: Dict[Address, Address] = {}
        for piece in fine.pieces:
            if piece.source.depth < m:
                continue
            source, target = piece.source.prefix(m), piece.target.prefix(m)
            if image_of.setdefault(source, target) != target:
                raise NotInLevelSubgroup(
                    f"{g} splits the depth-{m} cylinder {source}, so it is not in O_{ctx.n}")

    images = [0] * ctx.k_n
    for piece in fine.pieces:
        images[ctx.index(piece.source.prefix(ctx.n))] = ctx.index(piece.target.prefix(ctx.n))
    return Permutation(tuple(images))


def level_images(elements: Sequence[AlmostAuto], ctx: LevelContext) -> List[Permutation]:
    return [level_quotient(g, ctx) for g in elements]


def _dedupe(elements: Sequence[AlmostAuto], ctx: LevelContext) -> List[AlmostAuto]:
    seen = set()
    kept = []
    for g in elements:
        image = level_quotient(g, ctx)
        if image.is_identity() or image in seen:
            continue
        seen.add(image)
        kept.append(g)
    return kept


def _swap_and_cycle(degree: int) -> List[Permutation]:
    gens = [Permutation.from_cycles([(0, 1)], degree)]
    if degree > 2:
        gens.append(Permutation.from_cycles([tuple(range(degree))], degree))
    return gens


def _zeros(depth: int) -> Address:
    return Address((0,) * depth)


def gens_sym_level(ctx: LevelContext) -> List[AlmostAuto]:
    """Swap of the first two depth-n cylinders and the cycle through all of them."""
    sig = ctx.signature
    gens = [cylinder_swap(sig, ctx.leaf(0), ctx.leaf(1))]
    if ctx.k_n > 2:
        gens.append(cylinder_cycle(sig, ctx.leaves))
    return gens


def _wreath_below(sig: Signature, vertex: Address, depths: range) -> List[AlmostAuto]:
    gens = []
    for j in depths:
        here = vertex.extend((0,) * (j - vertex.depth))
        gens.extend(vertex_permutation(sig, here, p) for p in _swap_and_cycle(sig.arity(here.depth)))
    return gens


def gens_aut_ball(ctx: LevelContext) -> List[AlmostAuto]:
    """
    Generators of the image W_n of Aut(T_{d,k}) at level n.

    Sym(k) at the root and Sym(d) at the first vertex 0^j of every depth
    1 <= j < n; conjugates come for free once the upper levels act transitively.
    """
    sig = ctx.signature
    gens = _wreath_below(sig, Address.root(), range(0, ctx.n))
    return _dedupe(gens, ctx)


def gens_An(ctx: LevelContext, n0: int) -> List[Permutation]:
    """
    Image of O_{n0} in Sym(k_n): Sym(k_{n0}) on the depth-n0 cylinders, and the
    iterated wreath of Sym(d) inside each of them.
    """
    if not 1 <= n0 < ctx.n:
        raise BadLevels(f"Need 1 <= n0 < n, got n0={n0}, n={ctx.n}")
    sig = ctx.signature
    blocks = ball_leafset(sig, n0).leaves
    gens: List[AlmostAuto] = []
    if len(blocks) >= 2:
        gens.append(cylinder_swap(sig, blocks[0], blocks[1]))
    if len(blocks) > 2:
        gens.append(cylinder_cycle(sig, blocks))
    gens.extend(_wreath_below(sig, _zeros(n0), range(n0, ctx.n)))
    return [level_quotient(g, ctx) for g in _dedupe(gens, ctx)]


def gens_P(ctx: LevelContext) -> List[Permutation]:
    """Direct product over the root children of the level-preserving groups inside each."""
    if ctx.n < 2:
        raise BadLevels(f"P needs n >= 2, got {ctx.n}")
    sig = ctx.signature
    gens: List[AlmostAuto] = []
    for i in range(sig.k):
        gens.extend(_wreath_below(sig, Address.of(i), range(1, ctx.n)))
    return [level_quotient(g, ctx) for g in _dedupe(gens, ctx)]


def gens_end_stabilizer(xi_prefix: Address, ctx: LevelContext) -> List[Permutation]:
    """Generators of the stabilizer of the leaf xi_prefix in Sym(k_n)."""
    if xi_prefix.depth != ctx.n:
        raise BadLevels(f"End prefix {xi_prefix} must have depth {ctx.n}")
    fixed = ctx.index(xi_prefix)
    others = [x for x in range(ctx.k_n) if x != fixed]
    if len(others) < 2:
        return [Permutation.identity(ctx.k_n)]
    gens = [Permutation.from_cycles([others[:2]], ctx.k_n)]
    if len(others) > 2:
        gens.append(Permutation.from_cycles([others], ctx.k_n))
    return gens


@dataclass
class LevelRecord:
    n: int
    k_n: int
    generators: List[Permutation]
    component: str
    point: Optional[Address] = None
    product_covers: Optional[bool] = None
    three_primes: Optional[bool] = None
    candidates: List[Address] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        data = {
            'n': self.n,
            'k_n': self.k_n,
            'generators': [g.to_cycle_string() for g in self.generators],
            'verdict_component': self.component,
        }
        if self.point is not None:
            data['fixed_leaf'] = self.point.to_text()
        if self.product_covers is not None:
            data['product_covers'] = self.product_covers
        if self.three_primes is not None:
            data['three_primes'] = self.three_primes
        return data


@dataclass
class CocompactCertificate:
    signature: Signature
    levels: List[LevelRecord]
    verdict: str
    chain: List[Address] = field(default_factory=list)
    failed_level: Optional[int] = None
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        data = {
            'signature': self.signature.to_list(),
            'levels': [level.to_dict() for level in self.levels],
            'verdict': self.verdict,
        }
        if self.verdict == END_STABILIZER:
            data['chain'] = [a.to_text() for a in self.chain]
        if self.verdict == INCONCLUSIVE:
            data['level'] = self.failed_level
            data['reason'] = self.reason
        return data


def _check_levels(sig: Signature, per_level: Sequence[Tuple[int, Sequence[Permutation]]]):
    if not per_level:
        raise BadLevels("No levels given")
    numbers = [n for n, _ in per_level]
    if numbers != list(range(numbers[0], numbers[0] + len(numbers))) or numbers[0] < 1:
        raise BadLevels(f"Levels must be contiguous and positive, got {numbers}")
    for n, gens in per_level:
        k_n = sig.k * sig.d ** (n - 1)
        for g in gens:
            if g.degree != k_n:
                raise DegreeMismatch(f"Level {n} generator {g} has degree {g.degree}, expected {k_n}")


def _end_chain(records: Sequence[LevelRecord]) -> Optional[List[Address]]:
    """Lexicographically first chain of candidate leaves, each the parent of the next."""
    for leaf in records[-1].candidates:
        chain = [leaf]
        for record in reversed(records[:-1]):
            parent = chain[-1].parent
            if parent not in record.candidates:
                break
            chain.append(parent)
        else:
            return list(reversed(chain))
    return None


def certify_cocompact(sig: Signature, per_level: Sequence[Tuple[int, Sequence[Permutation]]],
                      n0: Optional[int] = None) -> CocompactCertificate:
    """
    Classify each B_n and combine the verdicts.

    A level of degree 2 can both contain Alt and fix a point, so the end
    stabilizer verdict asks only that every level fixes some leaf with Alt of
    the rest, and that those leaves can be chosen along a single end.

    With ``n0`` the record also states whether Sym(k_n) = A_n·B_n holds and
    whether [k_n/2, k_n] contains three primes, the two hypotheses of the
    dichotomy.
    """
    _check_levels(sig, per_level)
    records: List[LevelRecord] = []
    for n, gens in per_level:
        ctx = LevelContext(sig, n)
        group = PermGroup(list(gens) or [Permutation.identity(ctx.k_n)])
        verdict = classify_factorization(group)
        record = LevelRecord(n, ctx.k_n, list(gens), verdict.tag,
                             candidates=[ctx.leaf(x) for x in alt_complement_points(group)])
        if n0 is not None and n0 < n:
            record.three_primes = prime_count_half_interval(ctx.k_n) >= 3
            try:
                record.product_covers = product_covers(PermGroup(gens_An(ctx, n0)), group)
            except ResourceExhausted as e:
                logger.warning("Level %d: factorization check gave up: %s", n, e)
        logger.info("Level %d (k_n=%d): %s", n, ctx.k_n, verdict.tag)
        records.append(record)

    for record in records:
        if record.component == NEITHER:
            return CocompactCertificate(sig, records, INCONCLUSIVE, failed_level=record.n, reason=NEITHER)
    if all(record.component == CONTAINS_ALT for record in records):
        return CocompactCertificate(sig, records, DENSE)
    for record in records:
        if not record.candidates:
            return CocompactCertificate(sig, records, INCONCLUSIVE, failed_level=record.n, reason='mixed')

    chain = _end_chain(records)
    if chain is None:
        return CocompactCertificate(sig, records, INCONCLUSIVE,
                                    failed_level=records[-1].n, reason='inconsistent chain')
    for record, leaf in zip(records, chain):
        record.point = leaf
    return CocompactCertificate(sig, records, END_STABILIZER, chain=chain)


def fixture_levels(sig: Signature, kind: str, levels: range) -> List[Tuple[int, List[Permutation]]]:
    """Per-level generators for the built-in examples: 'sym', 'end-stabilizer' or 'trivial'."""
    result = []
    for n in levels:
        ctx = LevelContext(sig, n)
        if kind == 'sym':
            gens = level_images(gens_sym_level(ctx), ctx)
        elif kind == 'end-stabilizer':
            gens = gens_end_stabilizer(_zeros(n), ctx)
        elif kind == 'trivial':
            gens = [Permutation.identity(ctx.k_n)]
        else:
            raise BadLevels(f"Unknown fixture {kind!r}")
        result.append((n, gens))
    return result
