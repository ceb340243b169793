"""chernkit: Chern numbers of 2D Bloch Hamiltonians, phase diagrams,
wall-crossing families, and quadratic-integer lattice shell classification."""

from .quadring import (
    CapacityError,
    PrimeBehavior,
    QuadraticRing,
    RingElement,
    RingError,
    Shell,
    classify_prime,
    commensurate_distances,
    distance_report,
    honeycomb_admissible,
    honeycomb_site_kind,
    is_isolated_norm,
    isolated_norm_advisory,
    kagome_admissible,
    kagome_site_kind,
    make_ring,
    norm_of,
    shell_enumerate,
    square_admissible,
    triangular_admissible,
)
from .models import (
    BlochModel,
    BrillouinZone,
    ModelError,
    PreDiracPoint,
    assemble,
    builtin_model,
    catalog,
    eval_field,
    fold_bands,
    gap,
    pre_dirac_points,
    scale_model,
    spectrum,
)
from .invariants import (
    ChernResult,
    CrossValidationError,
    DegenerateFamilyError,
    InvariantError,
    MethodInapplicableError,
    PlanarCurve,
    RaySelectionError,
    ResolutionError,
    chern_berry_lattice,
    cross_validate,
    degree_integral,
    degree_ray,
    sphere_map_degree,
    winding_number,
)
from .phasediag import (
    DEGENERATE,
    Cell,
    FanDiagram,
    FanFamily,
    PhaseDiagram,
    RoseCurve,
    WallFamily,
    dirac_count,
    fan_family,
    locate_transition,
    minimum_gap,
    rose_curve,
    scan,
    suspension,
    verify_realization,
    wall_family,
    wall_zeros,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
