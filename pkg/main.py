#!/usr/bin/env python3
"""
Neretin toolkit - batch command-line front end

Every command reads JSON (a file given with --input, or standard input) and
flags, and writes one JSON document to standard output.  Diagnostics go to
standard error.

Usage:
    python main.py perm order --gens "(0 1),(0 1 2 3)"              # Group order
    python main.py --sig 2,2 tree ball --n 3                         # Depth-3 leaves
    python main.py element canonical --input g.json                  # Normal form
    python main.py level certify --input cert.json                   # Cocompactness verdict
    python main.py measure trace --target 0 --steps 10               # Contractor trace
    python main.py verify all                                        # Acceptance suite

Exit codes: 0 success, 1 domain error, 2 usage or input error, 3 resource limit.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

# Add the project root to Python path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from neretin_toolkit.config import config
from neretin_toolkit.exceptions import (
    CodecError, ConfigurationError, NeretinToolkitError, ResourceExhausted,
)
from neretin_toolkit.elements.almost_auto import (
    AlmostAuto, aa_compose, aa_equals, aa_inverse, apply_to_prefix, canonicalize, support,
)
from neretin_toolkit.groups.factorization import (
    classify_factorization, factorization_orbit_claim, jordan_check,
)
from neretin_toolkit.groups.group import (
    PermGroup, minimal_blocks, normalizer, product_covers, subgroup_intersection,
)
from neretin_toolkit.groups.subgroups import enumerate_subgroups_small
from neretin_toolkit.services.acceptance import AcceptanceRunner
from neretin_toolkit.services.boundary_dyn import (
    contractor_toward, displace_points, f_stabilizer_fixed_point, invariant_measures, pushforward,
    proximality_run, uniform_measure,
)
from neretin_toolkit.services.finite_level import (
    LevelContext, certify_cocompact, fixture_levels, gens_An, gens_aut_ball, gens_end_stabilizer,
    gens_P, gens_sym_level, level_images, level_quotient,
)
from neretin_toolkit.tree.addresses import (
    Address, ball_leafset, common_refinement, cylinder_mass, expand_leaf, validate_address,
)
from neretin_toolkit.utils import codec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class CommandResult:
    exit_code: int
    payload: Optional[Dict[str, Any]] = None
    diagnostics: List[str] = field(default_factory=list)

    def stdout(self) -> str:
        return codec.dumps(self.payload) if self.payload is not None else ''


class NeretinToolkitApp:
    """
    Dispatches parsed command lines to the library.

    One method per command group; each returns the JSON payload and lets
    toolkit errors propagate to ``run``, which turns them into exit codes.
    """

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.signature = codec.signature_from(args.sig)

    # input helpers

    def _read_input(self) -> Any:
        path = getattr(self.args, 'input', None)
        if path in (None, '-'):
            text = sys.stdin.read()
        else:
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    text = f.read()
            except OSError as e:
                raise CodecError(f"Cannot read {path}: {e}") from e
        return codec.loads(text)

    def _elements(self) -> List[AlmostAuto]:
        data = self._read_input()
        items = data if isinstance(data, list) else [data]
        if not items:
            raise CodecError("No element given")
        elements = [codec.element_from_dict(item) for item in items]
        for g in elements:
            if g.signature != elements[0].signature:
                raise CodecError("Elements have different signatures")
        return elements

    def _element(self) -> AlmostAuto:
        elements = self._elements()
        if len(elements) != 1:
            raise CodecError(f"Expected one element, got {len(elements)}")
        return elements[0]

    def _group(self, text: Optional[str], what: str = '--gens') -> PermGroup:
        if not text:
            raise CodecError(f"{what} is required")
        perms = codec.permutations_from(text, self.args.degree or 0)
        if not perms:
            raise CodecError(f"{what} holds no permutation")
        return PermGroup(perms)

    @staticmethod
    def _group_payload(group: PermGroup) -> Dict[str, Any]:
        return {
            'degree': group.degree,
            'order': str(group.order),
            'generators': codec.permutation_list(group.generators),
        }

    # element

    def run_element(self) -> Dict[str, Any]:
        action = self.args.element_action
        if action == 'compose':
            elements = self._elements()
            result = elements[-1]
            for g in reversed(elements[:-1]):
                result = aa_compose(g, result)
            return codec.element_to_dict(canonicalize(result))
        if action == 'inverse':
            return codec.element_to_dict(canonicalize(aa_inverse(self._element())))
        if action == 'canonical':
            return codec.element_to_dict(canonicalize(self._element()))
        if action == 'equal':
            elements = self._elements()
            if len(elements) != 2:
                raise CodecError(f"equal needs two elements, got {len(elements)}")
            return {'equal': aa_equals(*elements)}
        if action == 'support':
            return {'support': support(self._element()).to_list()}
        if action == 'apply':
            g = self._element()
            image, state = apply_to_prefix(g, Address.parse(self.args.prefix))
            return {'image': image.to_text(), 'state': state}
        raise CodecError("element needs an action")

    # perm

    def run_perm(self) -> Dict[str, Any]:
        action = self.args.perm_action
        if action is None:
            raise CodecError("perm needs an action")
        if action == 'jordan-scan' and not self.args.gens:
            return self._jordan_scan(self.args.degree)
        group = self._group(self.args.gens)
        if action == 'order':
            return {'order': str(group.order)}
        if action == 'blocks':
            systems = minimal_blocks(group)
            return {
                'primitive': not systems,
                'blocks': [[list(block) for block in s.blocks] for s in systems],
            }
        if action == 'primitive':
            return {'primitive': not minimal_blocks(group)}
        if action == 'jordan-scan':
            return jordan_check(group).to_dict()
        if action == 'factor-classify':
            claim = factorization_orbit_claim(group)
            payload = classify_factorization(group).to_dict()
            payload['orbit_sizes'] = claim.orbit_sizes
            return payload
        if action == 'intersect':
            return self._group_payload(subgroup_intersection(group, self._group(self.args.other, '--other')))
        if action == 'normalizer':
            return self._group_payload(normalizer(group, self._group(self.args.other, '--other')))
        if action == 'product-covers':
            return {'covers': product_covers(group, self._group(self.args.other, '--other'))}
        raise CodecError(f"Unknown perm action {action!r}")

    def _jordan_scan(self, degree: Optional[int]) -> Dict[str, Any]:
        """Jordan's criterion over every subgroup of Sym(degree)."""
        if not degree:
            raise CodecError("jordan-scan needs --gens or --degree")
        subgroups = enumerate_subgroups_small(degree)
        transitive = applies = violations = 0
        for group in subgroups:
            if not group.is_transitive():
                continue
            transitive += 1
            report = jordan_check(group)
            applies += report.jordan_applies
            violations += report.violates_theorem
        return {
            'degree': degree,
            'subgroups': len(subgroups),
            'transitive': transitive,
            'jordan_applies': applies,
            'violations': violations,
        }

    # tree

    def run_tree(self) -> Dict[str, Any]:
        sig = self.signature
        action = self.args.tree_action
        if action == 'ball':
            leaves = ball_leafset(sig, self.args.n)
            return {'count': len(leaves), 'leaves': leaves.to_list()}
        if action == 'refine':
            leaves = codec.leafset_from(sig, self.args.leaves)
            for vertex in self.args.expand or []:
                leaves = expand_leaf(leaves, Address.parse(vertex))
            if self.args.other:
                leaves = common_refinement(leaves, codec.leafset_from(sig, self.args.other))
            return {'leaves': leaves.to_list()}
        if action == 'mass':
            if self.args.clopen:
                mass = codec.clopen_from(sig, self.args.clopen).mass()
            elif self.args.address:
                mass = cylinder_mass(sig, validate_address(sig, Address.parse(self.args.address)))
            else:
                raise CodecError("mass needs --address or --clopen")
            return {'mass': codec.fraction_text(mass)}
        raise CodecError("tree needs an action")

    # level

    def run_level(self) -> Dict[str, Any]:
        action = self.args.level_action
        if action == 'quotient':
            g = self._element()
            ctx = LevelContext(g.signature, self.args.n)
            image = level_quotient(g, ctx)
            return {'n': ctx.n, 'k_n': ctx.k_n, 'permutation': image.to_cycle_string(),
                    'images': list(image.images)}
        if action == 'gens':
            return self._level_gens()
        if action == 'certify':
            return self._certify()
        raise CodecError("level needs an action")

    def _level_gens(self) -> Dict[str, Any]:
        ctx = LevelContext(self.signature, self.args.n)
        kind = self.args.kind
        if kind == 'sym':
            perms = level_images(gens_sym_level(ctx), ctx)
        elif kind == 'aut':
            perms = level_images(gens_aut_ball(ctx), ctx)
        elif kind == 'An':
            perms = gens_An(ctx, self.args.n0)
        elif kind == 'P':
            perms = gens_P(ctx)
        else:
            xi = Address.parse(self.args.xi) if self.args.xi else Address((0,) * ctx.n)
            perms = gens_end_stabilizer(xi, ctx)
        group = PermGroup(perms)
        return {'n': ctx.n, 'k_n': ctx.k_n, 'kind': kind,
                'generators': codec.permutation_list(perms), 'order': str(group.order)}

    def _certify(self) -> Dict[str, Any]:
        if self.args.fixture:
            sig = self.signature
            per_level = fixture_levels(sig, self.args.fixture, range(1, self.args.levels + 1))
            n0 = self.args.n0
        else:
            sig, per_level, n0 = codec.certificate_input(self._read_input())
            n0 = self.args.n0 if self.args.n0 is not None else n0
        return certify_cocompact(sig, per_level, n0).to_dict()

    # measure

    def run_measure(self) -> Dict[str, Any]:
        sig = self.signature
        action = self.args.measure_action
        if action == 'push':
            data = self._read_input()
            try:
                g = codec.element_from_dict(data['element'])
                mu = codec.measure_from_dict(g.signature, data['measure'])
            except (KeyError, TypeError) as e:
                raise CodecError(f"push needs 'element' and 'measure': {e}") from e
            return pushforward(g, mu).to_dict()
        if action == 'trace':
            target = Address.parse(self.args.target)
            contractor = contractor_toward(target, sig)
            trace = proximality_run(contractor.element, uniform_measure(LevelContext(sig, 1)),
                                    target, self.args.steps)
            payload = trace.to_dict()
            payload['element'] = codec.element_to_dict(contractor.element)
            predicted = contractor.predicted_masses(self.args.steps)
            payload['predicted'] = [codec.fraction_text(m) for m in predicted]
            return payload
        if action == 'invariant':
            ctx = LevelContext(sig, self.args.n)
            if self.args.gens:
                gens = codec.permutations_from(self.args.gens, ctx.k_n)
            else:
                gens = level_images(gens_aut_ball(ctx), ctx)
            return {'measures': [mu.to_dict() for mu in invariant_measures(gens, ctx)]}
        if action == 'displace':
            points = [Address.parse(p) for p in self.args.point or []]
            targets = [codec.clopen_from(sig, t) for t in self.args.target_set or []]
            result = displace_points(points, targets)
            payload = result.to_dict()
            payload['element'] = codec.element_to_dict(result.element)
            return payload
        if action == 'f-fixed':
            alpha = codec.clopen_from(sig, self.args.clopen)
            chain = f_stabilizer_fixed_point(alpha, self.args.depth)
            return {'clopen': alpha.to_list(), 'chain': [a.to_text() for a in chain]}
        raise CodecError("measure needs an action")

    # verify

    def run_verify(self) -> Dict[str, Any]:
        runner = AcceptanceRunner(samples=self.args.samples)
        return runner.run(self.args.section or 'all')

    def dispatch(self) -> Dict[str, Any]:
        handlers = {
            'element': self.run_element,
            'perm': self.run_perm,
            'tree': self.run_tree,
            'level': self.run_level,
            'measure': self.run_measure,
            'verify': self.run_verify,
        }
        if self.args.command not in handlers:
            raise CodecError("A command is required")
        return handlers[self.args.command]()


def create_cli_parser() -> argparse.ArgumentParser:
    """Create and configure the CLI argument parser."""
    parser = argparse.ArgumentParser(
        prog='neretin',
        description='Exact computations for the almost-automorphism groups of T_{d,k}',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    %(prog)s perm order --gens "(0 1),(0 1 2 3)"             # {"order":"24"}
    %(prog)s perm jordan-scan --degree 5                     # Jordan over all subgroups of Sym(5)
    %(prog)s --sig 2,3 tree ball --n 2                       # The six depth-2 leaves of T_{2,3}
    %(prog)s element compose --input pair.json               # g o h for a JSON list [g, h]
    %(prog)s level certify --fixture end-stabilizer          # EndStabilizer, chain 0, 00, 000
    %(prog)s measure displace --point 00 --target "{10}"     # Push 00 into Cyl(10)
    %(prog)s verify level                                    # One acceptance section
        """
    )
    parser.add_argument('--sig', default='2,2', help='Tree signature d,k (default: 2,2)')
    parser.add_argument('--seed', type=int, default=None, help='Random seed (default: 0)')
    parser.add_argument('--depth-limit', type=int, default=None,
                        help='Maximum tree depth explored (default: 32)')
    parser.add_argument('--budget', type=int, default=None,
                        help='Random sample and backtrack node budget')
    parser.add_argument('--verbose', action='store_true', help='Log progress to standard error')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # element
    element_parser = subparsers.add_parser('element', help='Almost automorphisms (JSON elements)')
    element_sub = element_parser.add_subparsers(dest='element_action')
    for name, text in (('compose', 'Compose a JSON list of elements, rightmost first'),
                       ('inverse', 'Inverse of an element'),
                       ('canonical', 'Canonical form of an element'),
                       ('equal', 'Whether two elements agree on every end'),
                       ('support', 'Support of an element as a clopen set')):
        action = element_sub.add_parser(name, help=text)
        action.add_argument('--input', default='-', help='JSON file (default: standard input)')
    apply_parser = element_sub.add_parser('apply', help='Image of a prefix')
    apply_parser.add_argument('--input', default='-', help='JSON file (default: standard input)')
    apply_parser.add_argument('--prefix', required=True, help='Address such as 0110')

    # perm
    perm_parser = subparsers.add_parser('perm', help='Finite permutation groups')
    perm_sub = perm_parser.add_subparsers(dest='perm_action')
    for name, text in (('order', 'Group order'),
                       ('blocks', 'Minimal block systems'),
                       ('primitive', 'Primitivity test'),
                       ('jordan-scan', 'Jordan criterion for one group, or all of Sym(--degree)'),
                       ('factor-classify', 'ContainsAlt / FixesPointWithAltComplement / Neither'),
                       ('intersect', 'Intersection with --other'),
                       ('normalizer', 'Normalizer of --other in the group'),
                       ('product-covers', 'Whether the group times --other is everything')):
        action = perm_sub.add_parser(name, help=text)
        action.add_argument('--gens', help='Generators in cycle notation, e.g. "(0 1),(0 1 2)"')
        action.add_argument('--other', help='Second group in cycle notation')
        action.add_argument('--degree', type=int, default=None, help='Permutation degree')

    # tree
    tree_parser = subparsers.add_parser('tree', help='Leaf sets and clopen sets')
    tree_sub = tree_parser.add_subparsers(dest='tree_action')
    ball_parser = tree_sub.add_parser('ball', help='All leaves of depth n')
    ball_parser.add_argument('--n', type=int, required=True)
    refine_parser = tree_sub.add_parser('refine', help='Expand leaves or refine against another leaf set')
    refine_parser.add_argument('--leaves', required=True, help='Leaf set such as "{0,10,11}"')
    refine_parser.add_argument('--expand', action='append', help='Leaf to expand (repeatable)')
    refine_parser.add_argument('--other', help='Leaf set for the common refinement')
    mass_parser = tree_sub.add_parser('mass', help='Uniform mass of a cylinder or clopen set')
    mass_parser.add_argument('--address')
    mass_parser.add_argument('--clopen', help='Clopen set such as "{0,10}"')

    # level
    level_parser = subparsers.add_parser('level', help='Finite level quotients')
    level_sub = level_parser.add_subparsers(dest='level_action')
    quotient_parser = level_sub.add_parser('quotient', help='Image of an element of O_n in Sym(k_n)')
    quotient_parser.add_argument('--input', default='-')
    quotient_parser.add_argument('--n', type=int, required=True)
    gens_parser = level_sub.add_parser('gens', help='Generators of a standard level subgroup')
    gens_parser.add_argument('--n', type=int, required=True)
    gens_parser.add_argument('--kind', choices=['sym', 'aut', 'An', 'P', 'end-stabilizer'], default='sym')
    gens_parser.add_argument('--n0', type=int, default=1, help='Level of A_n (kind An)')
    gens_parser.add_argument('--xi', help='Fixed leaf of depth n (kind end-stabilizer)')
    certify_parser = level_sub.add_parser('certify', help='Dense / EndStabilizer / Inconclusive')
    certify_parser.add_argument('--input', default='-')
    certify_parser.add_argument('--fixture', choices=['sym', 'end-stabilizer', 'trivial'])
    certify_parser.add_argument('--levels', type=int, default=3, help='Fixture levels 1..N')
    certify_parser.add_argument('--n0', type=int, default=None, help='Also test Sym = A_n B_n')

    # measure
    measure_parser = subparsers.add_parser('measure', help='Boundary measures and dynamics')
    measure_sub = measure_parser.add_subparsers(dest='measure_action')
    push_parser = measure_sub.add_parser('push', help='Pushforward of {"element", "measure"}')
    push_parser.add_argument('--input', default='-')
    trace_parser = measure_sub.add_parser('trace', help='Contractor proximality trace')
    trace_parser.add_argument('--target', required=True, help='Prefix of the attracting end')
    trace_parser.add_argument('--steps', type=int, default=10)
    invariant_parser = measure_sub.add_parser('invariant', help='Extreme invariant measures at level n')
    invariant_parser.add_argument('--n', type=int, required=True)
    invariant_parser.add_argument('--gens', help='Level-n generators (default: Aut image)')
    displace_parser = measure_sub.add_parser('displace', help='Push points into disjoint clopen sets')
    displace_parser.add_argument('--point', action='append', help='Point prefix (repeatable)')
    displace_parser.add_argument('--target', dest='target_set', action='append',
                                 help='Target clopen set, one per point (repeatable)')
    fixed_parser = measure_sub.add_parser('f-fixed', help='End fixed by the F-stabilizer of a clopen set')
    fixed_parser.add_argument('--clopen', required=True)
    fixed_parser.add_argument('--depth', type=int, default=None)

    # verify
    verify_parser = subparsers.add_parser('verify', help='Run the acceptance suite')
    verify_parser.add_argument('section', nargs='?', default='all',
                               choices=['all', 'perm', 'tree', 'element', 'level', 'measure'])
    verify_parser.add_argument('--samples', type=int, default=1000, help='Random samples per check')

    return parser


def run(argv: Sequence[str]) -> CommandResult:
    """Parse ``argv``, run the command and map errors to exit codes."""
    parser = create_cli_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_USAGE
        return CommandResult(code, diagnostics=['usage error'] if code else [])

    try:
        config.override(depth_limit=args.depth_limit, seed=args.seed,
                        random_budget=args.budget, search_node_budget=args.budget)
        app = NeretinToolkitApp(args)
        payload = app.dispatch()
        if args.command == 'verify' and payload['failed']:
            return CommandResult(EXIT_DOMAIN, payload, [f"{payload['failed']} acceptance checks failed"])
        return CommandResult(EXIT_OK, payload)
    except ResourceExhausted as e:
        logger.error("Resource limit: %s", e)
        return CommandResult(EXIT_RESOURCE, diagnostics=[str(e)])
    except CodecError as e:
        logger.error("Input error: %s", e)
        return CommandResult(EXIT_USAGE, diagnostics=[str(e)])
    except ConfigurationError as e:
        logger.error("Configuration error: %s", e)
        return CommandResult(EXIT_USAGE, diagnostics=[str(e)])
    except NeretinToolkitError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return CommandResult(EXIT_DOMAIN, diagnostics=[f"{type(e).__name__}: {e}"])
    finally:
        config.reset()


def main():
    """Main entry point for the application."""
    verbose = '--verbose' in sys.argv[1:]
    logging.basicConfig(
        level=logging.INFO if verbose else str(config.log_level).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        result = run(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)

    if result.payload is not None:
        sys.stdout.write(result.stdout() + '\n')
    for line in result.diagnostics:
        sys.stderr.write(line + '\n')
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
