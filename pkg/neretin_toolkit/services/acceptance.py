"""
Acceptance suite behind ``verify``.

Each check is exact and desk-sized; the runner collects pass/fail counts per
section and never stops at the first failure.
"""

import logging
import random
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Tuple

from ..config import config
from ..exceptions import BadPrefix, NeretinToolkitError
from ..elements.almost_auto import (
    aa_compose, aa_equals, aa_inverse, apply_to_prefix, canonicalize, is_identity, rist_member,
    support,
)
from ..elements.builders import (
    cylinder_swap, identity, random_element, random_leafset, random_level_element,
    random_thompson_f,
)
from ..groups.factorization import (
    CONTAINS_ALT, FIXES_POINT, classify_factorization, first_degree_with_prime_count,
    jordan_check, primes_in_interval,
)
from ..groups.group import PermGroup, is_primitive, product_covers
from ..groups.permutation import Permutation
from ..groups.subgroups import enumerate_subgroups_small
from ..tree.addresses import (
    Address, Clopen, Signature, ball_leafset, common_refinement, cylinder_mass, reduced_signature,
)
from ..utils.codec import element_from_json, element_to_json
from .boundary_dyn import (
    contractor_toward, displace_points, invariant_measures, proximality_run, uniform_measure,
    verify_f_fixed_point,
)
from .finite_level import (
    DENSE, END_STABILIZER, INCONCLUSIVE, LevelContext, certify_cocompact, fixture_levels,
    gens_An, gens_aut_ball, gens_sym_level, level_images, level_quotient,
)

logger = logging.getLogger(__name__)

SECTIONS = ('perm', 'tree', 'element', 'level', 'measure')

SUBGROUP_COUNTS = {4: 30, 5: 156, 6: 1455}
TOWER_ORDERS = {(2, 2, 2): 24, (2, 2, 3): 40320, (2, 3, 2): 720}

Check = Callable[[], bool]


def _trial_division_primes(lo: Fraction, hi: int) -> List[int]:
    found = []
    for p in range(2, hi + 1):
        if p >= lo and all(p % q for q in range(2, int(p ** 0.5) + 1)):
            found.append(p)
    return found


class AcceptanceRunner:
    """Runs the exact property checks section by section."""

    def __init__(self, samples: int = 1000, displacements: int = 100, seed: Optional[int] = None):
        self.samples = samples
        self.displacements = displacements
        self.seed = config.seed if seed is None else seed

    def _rng(self, salt: int) -> random.Random:
        return random.Random(self.seed * 1000 + salt)

    def checks(self, section: str) -> List[Tuple[str, Check]]:
        table: Dict[str, List[Tuple[str, Check]]] = {
            'perm': [
                ('perm.algebra', self.check_perm_algebra),
                ('perm.subgroup_counts', self.check_subgroup_counts),
                ('perm.jordan_exhaustive', self.check_jordan_exhaustive),
                ('perm.factorization_witnesses', self.check_factorization_witnesses),
                ('perm.prime_table', self.check_prime_table),
            ],
            'tree': [
                ('tree.ball_sizes', self.check_ball_sizes),
                ('tree.refinement', self.check_refinement),
                ('tree.clopen_algebra', self.check_clopen_algebra),
            ],
            'element': [
                ('element.group_axioms', self.check_group_axioms),
                ('element.canonical_round_trip', self.check_canonical_round_trip),
                ('element.support', self.check_support),
            ],
            'level': [
                ('level.tower_surjectivity', self.check_tower),
                ('level.multiplicativity', self.check_multiplicativity),
                ('level.certifier_trichotomy', self.check_certifier),
            ],
            'measure': [
                ('measure.proximality_trace', self.check_proximality),
                ('measure.unique_invariant', self.check_unique_invariant),
                ('measure.displacement', self.check_displacement),
                ('measure.f_fixed_point', self.check_f_fixed_point),
            ],
        }
        if section == 'all':
            return [item for name in SECTIONS for item in table[name]]
        if section not in table:
            raise NeretinToolkitError(f"Unknown section {section!r}")
        return table[section]

    def run(self, section: str = 'all') -> Dict:
        items = self.checks(section)
        results = {
            'section': section,
            'total': len(items),
            'passed': 0,
            'failed': 0,
            'checks': {},
            'errors': [],
        }
        for name, check in items:
            logger.info("Running %s", name)
            try:
                ok = check()
            except NeretinToolkitError as e:
                logger.error("%s raised %s", name, e)
                ok = False
                results['errors'].append(f"{name}: {e}")
            if ok:
                results['passed'] += 1
            else:
                results['failed'] += 1
            results['checks'][name] = 'passed' if ok else 'failed'
        logger.info("Acceptance %s: %d/%d passed", section, results['passed'], results['total'])
        return results

    # perm

    def check_perm_algebra(self) -> bool:
        rng = self._rng(1)
        points = list(range(7))
        for _ in range(self.samples):
            p, q, r = (Permutation(tuple(rng.sample(points, len(points)))) for _ in range(3))
            if (p * q) * r != p * (q * r):
                return False
            if not (p * p.inverse()).is_identity():
                return False
            if any((p * q)(x) != p(q(x)) for x in points):
                return False
            if not p.power(p.order()).is_identity():
                return False
        return True

    def check_subgroup_counts(self) -> bool:
        return all(len(enumerate_subgroups_small(n)) == count for n, count in SUBGROUP_COUNTS.items())

    def check_jordan_exhaustive(self) -> bool:
        violations = 0
        for n in SUBGROUP_COUNTS:
            for group in enumerate_subgroups_small(n):
                if group.is_transitive() and jordan_check(group).violates_theorem:
                    violations += 1
        return violations == 0

    def check_factorization_witnesses(self) -> bool:
        sig = Signature(2, 2)
        for n in (2, 3):
            ctx = LevelContext(sig, n)
            a = PermGroup(gens_An(ctx, 1))
            if not a.is_transitive() or is_primitive(a):
                return False
            stabilizer = PermGroup.point_stabilizer(ctx.k_n, 0)
            full = PermGroup.symmetric(ctx.k_n)
            if not (product_covers(a, stabilizer) and product_covers(a, full)):
                return False
            if classify_factorization(stabilizer).tag != FIXES_POINT:
                return False
            if classify_factorization(full).tag != CONTAINS_ALT:
                return False
        return True

    def check_prime_table(self) -> bool:
        for n in range(1, 201):
            if primes_in_interval(Fraction(n, 2), n) != _trial_division_primes(Fraction(n, 2), n):
                return False
        return (first_degree_with_prime_count(3, closed=True) == 13
                and first_degree_with_prime_count(3, closed=False) == 14)

    # tree

    def check_ball_sizes(self) -> bool:
        for d, k in ((2, 2), (2, 3), (3, 2), (3, 4)):
            sig = Signature(d, k)
            for n in range(1, 5):
                ball = ball_leafset(sig, n)
                if len(ball) != k * d ** (n - 1):
                    return False
                if sum((cylinder_mass(sig, leaf) for leaf in ball), Fraction(0)) != 1:
                    return False
        return True

    def check_refinement(self) -> bool:
        rng = self._rng(2)
        for sig in (Signature(2, 2), Signature(3, 2)):
            for _ in range(max(self.samples // 10, 1)):
                first = random_leafset(sig, rng, 4)
                second = random_leafset(sig, rng, 4)
                common = common_refinement(first, second)
                if not (common.refines(first) and common.refines(second)):
                    return False
        return reduced_signature(Signature(3, 6)) == Signature(3, 2)

    def check_clopen_algebra(self) -> bool:
        rng = self._rng(3)
        sig = Signature(2, 3)
        for _ in range(max(self.samples // 10, 1)):
            leaves = random_leafset(sig, rng, 5).leaves
            alpha = Clopen(sig, tuple(leaf for leaf in leaves if rng.random() < 0.5))
            rest = alpha.complement()
            if not alpha.disjoint(rest) or not alpha.union(rest).is_whole():
                return False
            if alpha.mass() + rest.mass() != 1:
                return False
        return True

    # element

    def check_group_axioms(self) -> bool:
        rng = self._rng(4)
        sig = Signature(2, 2)
        one = identity(sig)
        for _ in range(self.samples):
            g, h, k = (random_element(sig, rng) for _ in range(3))
            if not aa_equals(aa_compose(aa_compose(g, h), k), aa_compose(g, aa_compose(h, k))):
                return False
            if not is_identity(aa_compose(g, aa_inverse(g))):
                return False
            if not aa_equals(aa_compose(one, g), g):
                return False
        return True

    def check_canonical_round_trip(self) -> bool:
        rng = self._rng(5)
        for sig in (Signature(2, 2), Signature(3, 2)):
            for _ in range(max(self.samples // 10, 1)):
                g = random_element(sig, rng)
                normal = canonicalize(g)
                if not aa_equals(normal, g):
                    return False
                text = element_to_json(normal)
                parsed = element_from_json(text)
                if element_to_json(parsed) != text or not aa_equals(parsed, g):
                    return False
        return True

    def check_support(self) -> bool:
        sig = Signature(2, 2)
        swap = cylinder_swap(sig, Address.parse('00'), Address.parse('11'))
        expected = Clopen(sig, (Address.parse('00'), Address.parse('11')))
        return (support(swap).cylinders == expected.cylinders
                and rist_member(swap, expected)
                and not rist_member(swap, Clopen(sig, (Address.parse('00'),))))

    # level

    def check_tower(self) -> bool:
        for (d, k, n), order in TOWER_ORDERS.items():
            ctx = LevelContext(Signature(d, k), n)
            group = PermGroup(level_images(gens_sym_level(ctx), ctx))
            if group.order != order or order != factorial(ctx.k_n):
                return False
        return True

    def check_multiplicativity(self) -> bool:
        rng = self._rng(6)
        for sig, n in ((Signature(2, 2), 2), (Signature(2, 3), 3)):
            ctx = LevelContext(sig, n)
            for _ in range(max(self.samples // 2, 1)):
                g = random_level_element(sig, rng, n)
                h = random_level_element(sig, rng, n)
                if level_quotient(aa_compose(g, h), ctx) != level_quotient(g, ctx) * level_quotient(h, ctx):
                    return False
        return True

    def check_certifier(self) -> bool:
        sig = Signature(2, 2)
        levels = range(1, 4)
        dense = certify_cocompact(sig, fixture_levels(sig, 'sym', levels))
        end = certify_cocompact(sig, fixture_levels(sig, 'end-stabilizer', levels))
        trivial = certify_cocompact(sig, fixture_levels(sig, 'trivial', levels))
        chain = [a.to_text() for a in end.chain]
        return (dense.verdict == DENSE and end.verdict == END_STABILIZER
                and chain == ['0', '00', '000'] and trivial.verdict == INCONCLUSIVE)

    # measure

    def check_proximality(self) -> bool:
        sig = Signature(2, 2)
        target = Address.of(0)
        contractor = contractor_toward(target, sig)
        trace = proximality_run(contractor.element, uniform_measure(LevelContext(sig, 1)), target, 10)
        expected = [1 - Fraction(1, 2 ** (m + 1)) for m in range(1, 11)]
        return trace.masses == expected and contractor.predicted_masses(10) == expected

    def check_unique_invariant(self) -> bool:
        for sig in (Signature(2, 2), Signature(2, 3)):
            for n in range(1, 5):
                ctx = LevelContext(sig, n)
                measures = invariant_measures(level_images(gens_aut_ball(ctx), ctx), ctx)
                if len(measures) != 1 or not measures[0].same_measure(uniform_measure(ctx)):
                    return False
        return True

    def _random_displacement_instance(self, rng: random.Random, sig: Signature):
        r = rng.randint(1, 3)
        cylinders = list(ball_leafset(sig, 3).leaves)
        rng.shuffle(cylinders)
        targets = [Clopen(sig, (c,)) for c in cylinders[:r]]
        points: List[Address] = []
        while len(points) < r:
            depth = rng.randint(4, 6)
            x = Address((rng.randrange(sig.k),) + tuple(rng.randrange(sig.d) for _ in range(depth - 1)))
            if any(t.contains_address(x) for t in targets) or any(x.comparable(y) for y in points):
                continue
            points.append(x)
        return points, targets

    def check_displacement(self) -> bool:
        rng = self._rng(7)
        sig = Signature(2, 2)
        done = attempts = 0
        while done < self.displacements:
            attempts += 1
            if attempts > 50 * self.displacements:
                logger.error("Could not build %d displacement instances", self.displacements)
                return False
            points, targets = self._random_displacement_instance(rng, sig)
            try:
                result = displace_points(points, targets)
            except BadPrefix:
                continue
            region = Clopen.empty(sig)
            for alpha in targets:
                region = region.union(alpha)
            for beta in result.neighbourhoods:
                region = region.union(Clopen(sig, (beta,)))
            if not rist_member(result.element, region):
                return False
            for x, alpha in zip(points, targets):
                image, _ = apply_to_prefix(result.element, x)
                if not alpha.contains_address(image):
                    return False
            done += 1
        return True

    def check_f_fixed_point(self) -> bool:
        rng = self._rng(8)
        sig = Signature(2, 2)
        elements = [random_thompson_f(sig, rng) for _ in range(max(self.samples // 10, 1))]
        return verify_f_fixed_point(Clopen.whole(sig), elements, depth=12)
