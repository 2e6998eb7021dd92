"""Computable G-sequential convergence on eventually periodic sequences."""
from .methods import (
    AVERAGING,
    Cesaro,
    Kernel,
    LacunaryScheme,
    Lim,
    Method,
    MethodSum,
    UnsupportedMethod,
    evaluate,
    in_domain,
    is_regular,
    lacunary_density,
    parse_method,
    statistical_density,
)
from .sequences import RATIONALS, EvPerSeq, GroupModel, ModelMismatch, cyclic, parse_sequence
from .topology import (
    PointSet,
    boundary,
    closure,
    closure_iterate,
    interior,
    is_closed,
    is_dense,
    is_open,
)

__version__ = "0.1.0"
