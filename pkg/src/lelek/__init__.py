"""Exact-arithmetic model of the Lelek fan as a Mahavier product of two slopes.

The relation ``G_{r,rho}`` is the union of the lines ``y = r x`` and
``y = rho x`` in the unit square.  Its Mahavier product is a Lelek fan when
``r`` and ``rho`` never connect, and the shift on it is transitive.
"""

from .cylinder import Cylinder, build_cylinder, contains, meets_fan, metric_diameter
from .errors import (
    BoundaryCoordinate,
    BudgetExceeded,
    DepthOverflow,
    EpsilonTooSmall,
    HorizonExceeded,
    InconsistentConstraints,
    InvalidCylinder,
    InvalidEps,
    LelekError,
    NCViolation,
    NonPositiveInput,
    OrderViolation,
    SearchExhausted,
)
from .fan import (
    EndpointClass,
    EndpointKind,
    FanPoint,
    classify_endpoint,
    coordinate,
    make_endpoint,
    metric_d,
    shift,
    validate_point,
)
from .invlim import (
    InvLimCylinder,
    InvLimPoint,
    PairStatus,
    UsefulPairTag,
    classify_endpoint_invlim,
    endpoint_near,
    k_coordinate,
    metric_D,
    shift_backward,
    shift_forward,
    validate_invlim,
    witness_transitivity_invlim,
)
from .orbit import OrbitProgram, non_injectivity_witness, realize, synthesize, verify, witness_transitivity
from .relation import (
    DEFAULT_PAIR,
    Monomial,
    SearchConstraint,
    SlopePair,
    density_profile,
    find_monomial,
    nc_witness,
    relation_contains,
    validate_nc,
)
from .render import RenderSpec, render_fan, render_orbit
from .words import ClimbToOne, ConstP, ConstR, Letter, P, Periodic, R, Word, normalize

__version__ = "0.1.0"
