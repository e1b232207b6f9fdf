from .acceptance import AcceptanceRunner
from .boundary_dyn import (
    CylinderMeasure, contractor_toward, displace_points, f_stabilizer_fixed_point,
    invariant_measures, proximality_run, pushforward, uniform_measure,
)
from .finite_level import LevelContext, certify_cocompact, level_quotient

__all__ = [
    'AcceptanceRunner', 'CylinderMeasure', 'LevelContext', 'certify_cocompact',
    'contractor_toward', 'displace_points', 'f_stabilizer_fixed_point', 'invariant_measures',
    'level_quotient', 'proximality_run', 'pushforward', 'uniform_measure',
]
