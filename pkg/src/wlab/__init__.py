"""wlab: exact Welschinger-invariant workbench.

Computes real enumerative invariants of rational surfaces: the two
attachment multiplicities mu+/mu- of curves relative to a (-2)-curve,
their W+/W- aggregations and the Morse-simplification rule, plus
tropical (floor diagram and lattice path) complex and purely real curve
counts for P2, F0 = P1xP1 and the second Hirzebruch surface F2.
"""

from .ab_engine import (
    AggregatedRow,
    AuditFailure,
    CurveRecord,
    InvariantResult,
    RelativeCountSet,
    TangencyProfile,
    apply_morse,
    complex_total,
    load_fixture,
    load_shipped_fixtures,
    modified_w,
    monotonicity_audit,
    parse_fixture,
    vanishing_applies,
    w_minus,
    w_plus,
)
from .errors import InputError
from .multiplicity import complex_weight, mu_minus, mu_plus, mu_plus_series
from .surface_model import (
    Component,
    DivisorClass,
    IntersectionLattice,
    MorseMove,
    RealStructureDescriptor,
    SurfaceModel,
    build_morse_move,
    conic_blowup_classes,
    intersect,
    surface,
    tangency_budget,
)
from .tropical import (
    FloorDiagram,
    MarkedFloorDiagram,
    NewtonPolygon,
    count_complex,
    count_welschinger_real,
    enumerate_floor_diagrams,
    kontsevich_count,
    lattice_path_count,
    lattice_path_count_for_class,
    polygon_for,
    quadric_welschinger,
    welschinger_result,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedRow",
    "AuditFailure",
    "Component",
    "CurveRecord",
    "DivisorClass",
    "FloorDiagram",
    "InputError",
    "IntersectionLattice",
    "InvariantResult",
    "MarkedFloorDiagram",
    "MorseMove",
    "NewtonPolygon",
    "RealStructureDescriptor",
    "RelativeCountSet",
    "SurfaceModel",
    "TangencyProfile",
    "apply_morse",
    "build_morse_move",
    "complex_total",
    "complex_weight",
    "conic_blowup_classes",
    "count_complex",
    "count_welschinger_real",
    "enumerate_floor_diagrams",
    "intersect",
    "kontsevich_count",
    "lattice_path_count",
    "lattice_path_count_for_class",
    "load_fixture",
    "load_shipped_fixtures",
    "modified_w",
    "monotonicity_audit",
    "mu_minus",
    "mu_plus",
    "mu_plus_series",
    "parse_fixture",
    "polygon_for",
    "quadric_welschinger",
    "surface",
    "tangency_budget",
    "vanishing_applies",
    "w_minus",
    "w_plus",
    "welschinger_result",
]
