from .factorization import (
    alt_complement_points, alt_omega_witness, classify_factorization, contains_alt_on,
    factorization_orbit_claim, first_degree_with_prime_count, jordan_check,
    prime_count_half_interval, primes_in_interval, subset_orbit_transitive,
)
from .group import (
    BlockSystem, PermGroup, bsgs_build, is_block_system, is_primitive, minimal_blocks,
    normalizer, orbits_on_tuples, product_covers, subgroup_intersection,
)
from .permutation import Permutation, parse_generator_list, perm_compose, perm_inverse
from .subgroups import enumerate_subgroups_small

__all__ = [
    'BlockSystem', 'PermGroup', 'Permutation', 'alt_complement_points', 'alt_omega_witness',
    'bsgs_build', 'classify_factorization', 'contains_alt_on', 'enumerate_subgroups_small',
    'factorization_orbit_claim', 'first_degree_with_prime_count', 'is_block_system',
    'is_primitive', 'jordan_check', 'minimal_blocks', 'normalizer', 'orbits_on_tuples',
    'parse_generator_list', 'perm_compose', 'perm_inverse', 'prime_count_half_interval',
    'primes_in_interval', 'product_covers', 'subgroup_intersection', 'subset_orbit_transitive',
]
