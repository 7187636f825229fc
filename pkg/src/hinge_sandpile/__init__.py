"""Exact critical groups of multigraphs and closed-form checks for hinge graphs."""

from .critical_group import (
    AbelianGroupStructure,
    GroupElementCoords,
    critical_group,
    divisor_to_coords,
    element_order,
    group_order,
    groups_isomorphic,
    normalize_factors,
)
from .divisor_algebra import (
    divisor_order,
    fire,
    fire_script,
    is_linearly_equivalent,
    is_q_reduced,
    make_delta,
    make_epsilon,
    make_eta,
    q_reduce,
)
from .graph_core import (
    HingeLayout,
    HingeSpec,
    Multigraph,
    build_hinge,
    build_thick_cycle,
    hinge_dual,
    laplacian,
)

__version__ = "0.1.0"
