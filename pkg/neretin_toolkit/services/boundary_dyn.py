"""
Exact measure dynamics on the boundary of T_{d,k}.

Measures are piecewise uniform: a leaf set with a rational mass per leaf,
spread inside each cylinder proportionally to the uniform measure.  Prefix
exchanges and tail automorphisms carry such measures to measures of the same
kind, so pushforwards stay exact.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import config
from ..exceptions import (
    BadPrefix, DegreeMismatch, DepthLimit, InvalidMeasure, MeasureError,
    PointInsideTarget, SignatureMismatch, TargetsNotDisjoint,
)
from ..elements.almost_auto import (
    AlmostAuto, apply_to_prefix, is_thompson_F, refine_domain, rist_member,
)
from ..elements.builders import cylinder_swap, prefix_exchange, product_of
from ..groups.group import PermGroup
from ..groups.permutation import Permutation
from ..tree.addresses import (
    Address, Clopen, LeafSet, Signature, common_refinement, complete_clopen, cylinder_mass,
    require_nonempty,
)
from .finite_level import LevelContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CylinderMeasure:
    """A probability measure that is a multiple of the uniform measure on each leaf cylinder."""

    support: LeafSet
    masses: Tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(Fraction(m) for m in self.masses)
        object.__setattr__(self, 'masses', masses)
        if len(masses) != len(self.support):
            raise InvalidMeasure(f"{len(masses)} masses for {len(self.support)} leaves")
        if any(m < 0 for m in masses):
            raise InvalidMeasure(f"Negative mass in {[str(m) for m in masses]}")
        total = sum(masses, Fraction(0))
        if total != 1:
            raise InvalidMeasure(f"Masses sum to {total}, not 1")

    @classmethod
    def from_mapping(cls, support: LeafSet, masses: Mapping[Address, Fraction]) -> 'CylinderMeasure':
        return cls(support, tuple(Fraction(masses.get(leaf, 0)) for leaf in support))

    @classmethod
    def dirac_like(cls, sig: Signature, leaf: Address) -> 'CylinderMeasure':
        """All mass spread uniformly over Cyl(leaf)."""
        support = complete_clopen(sig, [leaf])
        return cls.from_mapping(support, {leaf: Fraction(1)})

    @property
    def signature(self) -> Signature:
        return self.support.signature

    def mass_of(self, leaf: Address) -> Fraction:
        return self.masses[self.support.index(leaf)]

    def as_dict(self) -> Dict[Address, Fraction]:
        return dict(zip(self.support.leaves, self.masses))

    def refine(self, finer: LeafSet) -> 'CylinderMeasure':
        """The same measure on a finer leaf set; mass splits like the uniform measure."""
        if finer.signature != self.signature:
            raise SignatureMismatch(f"{finer.signature} does not match {self.signature}")
        sig = self.signature
        masses = []
        for leaf in finer:
            owner = self.support.leaf_above(leaf)
            if owner is None:
                raise InvalidMeasure(f"{finer} does not refine the support {self.support}")
            share = cylinder_mass(sig, leaf) / cylinder_mass(sig, owner)
            masses.append(self.mass_of(owner) * share)
        return CylinderMeasure(finer, tuple(masses))

    def same_measure(self, other: 'CylinderMeasure') -> bool:
        common = common_refinement(self.support, other.support)
        return self.refine(common).masses == other.refine(common).masses

    def to_dict(self) -> dict:
        return {
            'support': self.support.to_list(),
            'masses': [f"{m.numerator}/{m.denominator}" for m in self.masses],
        }


def uniform_measure(ctx: LevelContext) -> CylinderMeasure:
    """The uniform measure ν written on the depth-n leaves."""
    support = LeafSet(ctx.signature, ctx.leaves)
    mass = Fraction(1, ctx.k_n)
    return CylinderMeasure(support, tuple(mass for _ in support))


def pushforward(g: AlmostAuto, mu: CylinderMeasure) -> CylinderMeasure:
    """g_*μ: each domain cylinder hands its mass to its image cylinder."""
    if g.signature != mu.signature:
        raise SignatureMismatch(f"{g.signature} does not match {mu.signature}")
    common = common_refinement(mu.support, g.dom)
    fine_mu = mu.refine(common)
    fine_g = refine_domain(g, common)
    # tails are tree automorphisms, so the uniform shape inside each cylinder is kept
    image = {p.target: fine_mu.mass_of(p.source) for p in fine_g.pieces}
    return CylinderMeasure.from_mapping(fine_g.ran, image)


def mass_in(mu: CylinderMeasure, alpha: Clopen) -> Fraction:
    if mu.signature != alpha.signature:
        raise SignatureMismatch(f"{mu.signature} does not match {alpha.signature}")
    if alpha.is_empty():
        return Fraction(0)
    frame = complete_clopen(alpha.signature, alpha.cylinders)
    fine = mu.refine(common_refinement(mu.support, frame))
    return sum((m for leaf, m in zip(fine.support, fine.masses) if alpha.contains_address(leaf)),
               Fraction(0))


@dataclass(frozen=True)
class Contractor:
    """
    A prefix exchange squeezing everything toward the end w·0^∞.

    Cyl(w) goes into Cyl(w0); the other leaves move one step along a conveyor
    that feeds the remaining children of w and is refilled from the last leaf
    z, whose last child is the repelling end.
    """

    element: AlmostAuto
    attractor: Address
    repeller: Address
    conveyor: Tuple[Tuple[Address, Address], ...] = field(repr=False)

    def predicted_masses(self, steps: int) -> List[Fraction]:
        """Mass of Cyl(attractor) after 1..steps pushforwards of the uniform measure."""
        sig = self.element.signature
        z = self.repeller.parent
        outside = {target: cylinder_mass(sig, target)
                   for _, target in self.conveyor if not self.attractor.is_prefix_of(target)}
        trace = []
        for _ in range(steps):
            # restricted to each outside leaf the measure stays uniform
            outside = {target: (outside[source] if source in outside else outside[z] / sig.d)
                       for source, target in self.conveyor if target in outside}
            trace.append(1 - sum(outside.values(), Fraction(0)))
        return trace


def contractor_toward(xi_prefix: Address, sig: Signature) -> Contractor:
    if xi_prefix.is_root():
        raise BadPrefix("The contraction target needs a non-empty prefix")
    w = xi_prefix
    frame = complete_clopen(sig, [w])
    z = frame.leaves[-1] if frame.leaves[-1] != w else frame.leaves[0]
    others = [leaf for leaf in frame if leaf not in (w, z)]

    sources = others + [z.child(i) for i in range(sig.d)]
    targets = [w.child(i) for i in range(1, sig.d)] + others + [z]
    conveyor = tuple(zip(sources, targets))
    element = prefix_exchange(sig, [(w, w.child(0)), *conveyor])
    return Contractor(element, w, z.child(sig.d - 1), conveyor)


@dataclass
class ProximalityTrace:
    target: Address
    masses: List[Fraction] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'target': self.target.to_text(),
            'masses': [f"{m.numerator}/{m.denominator}" for m in self.masses],
        }


def proximality_run(g: AlmostAuto, mu: CylinderMeasure, target: Address,
                    steps: int) -> ProximalityTrace:
    """Mass of Cyl(target) after each of ``steps`` pushforwards by g."""
    if g.signature != mu.signature:
        raise SignatureMismatch(f"{g.signature} does not match {mu.signature}")
    region = Clopen(g.signature, (target,))
    trace = ProximalityTrace(target)
    for step in range(steps):
        mu = pushforward(g, mu)
        trace.masses.append(mass_in(mu, region))
        logger.debug("Step %d: mass %s in %s", step + 1, trace.masses[-1], target)
    return trace


def invariant_measures(gens: Sequence[Permutation], ctx: LevelContext) -> List[CylinderMeasure]:
    """Extreme invariant measures at level n: uniform on each orbit, ordered by smallest point."""
    for g in gens:
        if g.degree != ctx.k_n:
            raise DegreeMismatch(f"Generator {g} has degree {g.degree}, expected k_n={ctx.k_n}")
    group = PermGroup(list(gens) or [Permutation.identity(ctx.k_n)])
    support = LeafSet(ctx.signature, ctx.leaves)
    measures = []
    for orbit in sorted(group.orbits(), key=min):
        share = Fraction(1, len(orbit))
        masses = tuple(share if i in orbit else Fraction(0) for i in range(ctx.k_n))
        measures.append(CylinderMeasure(support, masses))
    return measures


@dataclass
class Displacement:
    element: AlmostAuto
    swaps: List[AlmostAuto]
    neighbourhoods: List[Address]
    images: List[Address]

    def to_dict(self) -> dict:
        return {
            'neighbourhoods': [b.to_text() for b in self.neighbourhoods],
            'images': [a.to_text() for a in self.images],
            'swaps': [str(s) for s in self.swaps],
        }


def _neighbourhood(point: Address, others: Sequence[Address], targets: Sequence[Clopen]) -> Address:
    """Shallowest prefix of ``point`` whose cylinder avoids every target and every other point."""
    for length in range(1, point.depth + 1):
        candidate = point.prefix(length)
        if any(t.meets_address(candidate) for t in targets):
            continue
        if any(candidate.is_prefix_of(other) for other in others):
            continue
        return candidate
    raise BadPrefix(f"Prefix {point} is too short to separate it from the targets and other points")


def displace_points(points: Sequence[Address], targets: Sequence[Clopen],
                    depth_limit: Optional[int] = None) -> Displacement:
    """
    Push each point x_i into α_i by a product of commuting cylinder swaps.

    β_i is the shallowest cylinder around x_i missing all targets and the
    other points; x_i's cylinder one level below β_i (or β_i itself when x_i
    is not longer) is swapped with the matching cylinder inside the first
    cylinder of α_i.
    """
    if len(points) != len(targets) or not points:
        raise MeasureError("Need one target per point")
    sig = targets[0].signature
    limit = depth_limit or config.depth_limit
    for alpha in targets:
        if alpha.signature != sig:
            raise SignatureMismatch(f"{alpha.signature} does not match {sig}")
        require_nonempty(alpha, "Targets must be non-empty")
    for i, alpha in enumerate(targets):
        for beta in targets[i + 1:]:
            if not alpha.disjoint(beta):
                raise TargetsNotDisjoint(f"Targets {alpha} and {beta} overlap")
    for x in points:
        if x.is_root():
            raise BadPrefix("Points need a non-empty prefix")
        if x.depth > limit:
            raise DepthLimit(f"Point {x} is deeper than the depth limit {limit}")
        if any(alpha.contains_address(x) for alpha in targets):
            raise PointInsideTarget(f"Point {x} already lies in a target")
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            if x.comparable(y):
                raise BadPrefix(f"Points {x} and {y} cannot be told apart from their prefixes")

    swaps, betas, images = [], [], []
    for i, (x, alpha) in enumerate(zip(points, targets)):
        others = [y for j, y in enumerate(points) if j != i]
        beta = _neighbourhood(x, others, targets)
        t = beta.depth
        b = x.prefix(t + 1) if x.depth > t else beta
        a = alpha.cylinders[0].extend(b.symbols[t:])
        swap = cylinder_swap(sig, a, b)
        if not rist_member(swap, Clopen(sig, (a, beta))):
            raise MeasureError(f"Swap {swap} leaves {alpha} ∪ {beta}")
        swaps.append(swap)
        betas.append(beta)

    element = product_of(sig, swaps)
    for x, alpha in zip(points, targets):
        image, _ = apply_to_prefix(element, x)
        if not alpha.contains_address(image):
            logger.error("Displacement failed: %s went to %s, outside %s", x, image, alpha)
            raise MeasureError(f"{x} was sent to {image}, outside {alpha}")
        images.append(image)
    logger.info("Displaced %d points with %d swaps", len(points), len(swaps))
    return Displacement(element, swaps, betas, images)


def f_stabilizer_fixed_point(alpha: Clopen, depth: Optional[int] = None) -> List[Address]:
    """
    Prefix chain of the lexicographically smallest end of α.

    The chain starts at the smallest cylinder as α was written, so
    {10,11} gives 10, 100, ... rather than starting at the merged 1.
    """
    require_nonempty(alpha)
    depth = depth or config.depth_limit
    start = alpha.given[0]
    return [start.extend((0,) * extra) for extra in range(max(depth - start.depth, 0) + 1)]


def image_clopen(g: AlmostAuto, alpha: Clopen) -> Clopen:
    """g(α) as a clopen set."""
    if alpha.is_empty():
        return alpha
    frame = complete_clopen(g.signature, alpha.cylinders)
    fine = refine_domain(g, common_refinement(g.dom, frame))
    cylinders: List[Address] = []
    for piece in fine.pieces:
        if alpha.contains_address(piece.source):
            cylinders.append(piece.target)
    return Clopen(g.signature, tuple(cylinders))


def stabilizes(g: AlmostAuto, alpha: Clopen) -> bool:
    return image_clopen(g, alpha).cylinders == alpha.cylinders


def verify_f_fixed_point(alpha: Clopen, elements: Iterable[AlmostAuto],
                         depth: Optional[int] = None) -> bool:
    """Every order-preserving element stabilizing α fixes its smallest end."""
    chain = f_stabilizer_fixed_point(alpha, depth)
    start, deepest = chain[0], chain[-1]
    checked = 0
    for g in elements:
        if not is_thompson_F(g) or not stabilizes(g, alpha):
            continue
        checked += 1
        image, _ = apply_to_prefix(g, deepest)
        if not (start.is_prefix_of(image) and all(s == 0 for s in image.symbols[start.depth:])):
            logger.error("%s moves the smallest end of %s to %s...", g, alpha, image)
            return False
    logger.info("Checked %d order-preserving elements stabilizing %s", checked, alpha)
    return True
