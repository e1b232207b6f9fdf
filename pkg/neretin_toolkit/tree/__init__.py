from .addresses import (
    Address, Clopen, LeafSet, Signature, ball_leafset, clopen_complement, clopen_contains,
    clopen_disjoint, common_refinement, complete_clopen, cylinder_mass, expand_leaf,
    reduced_signature, validate_address,
)

__all__ = [
    'Address', 'Clopen', 'LeafSet', 'Signature', 'ball_leafset', 'clopen_complement',
    'clopen_contains', 'clopen_disjoint', 'common_refinement', 'complete_clopen',
    'cylinder_mass', 'expand_leaf', 'reduced_signature', 'validate_address',
]
