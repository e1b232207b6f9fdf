from .almost_auto import (
    AlmostAuto, Piece, RistRelabeling, aa_compose, aa_equals, aa_inverse, apply_to_prefix,
    canonicalize, is_identity, is_level_preserving, is_thompson_F, refine_domain, refine_range,
    relabel_rist, rist_member, support,
)
from .machine import TailMachine, machine_minimize, product_machine

__all__ = [
    'AlmostAuto', 'Piece', 'RistRelabeling', 'TailMachine', 'aa_compose', 'aa_equals',
    'aa_inverse', 'apply_to_prefix', 'canonicalize', 'is_identity', 'is_level_preserving',
    'is_thompson_F', 'machine_minimize', 'product_machine', 'refine_domain', 'refine_range',
    'relabel_rist', 'rist_member', 'support',
]
