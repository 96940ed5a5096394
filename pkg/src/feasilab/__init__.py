"""feasilab: a numerical laboratory for the 2-set convex feasibility problem.

Alternating projections and their perturbed variants over exactly-projectable
convex sets, localized set-convergence metrics, empirical regularity moduli,
and scenario machinery reproducing the stability examples and the adaptive
counterexample with unbounded intersection.
"""

from .dynamics import (
    Trace,
    TraceRecord,
    Verdict,
    cosine,
    run_ap,
    run_perturbed_ap,
    stability_verdict,
)
from .metrics import (
    Couple,
    GapEstimate,
    GapSampler,
    NonConvergentError,
    ValidationFailureError,
    aw_gap,
    diameter_estimate,
    displacement_vector,
    dist_to_E,
    dykstra_project,
    excess_local,
    make_couple,
    point_dist,
)
from .perturbations import (
    AdversarialSchedule,
    ConstantSchedule,
    Schedule,
    ScheduleStallError,
    TranslationSchedule,
    VertexJitterSchedule,
    make_wedge,
)
from .regularity import (
    NoPositiveDeltaError,
    RegularityReport,
    SamplerSpec,
    check_annulus_diameter,
    check_boundary_bound,
    check_quasi_orthogonality,
    check_strongly_exposes,
    contraction_factor,
    estimate_delta,
    estimate_linear_K,
    modulus_of_convexity,
    regularity_report,
)
from .scenarios import RunReport, ScenarioSpec, get_scenario, list_scenarios, run_scenario
from .serialize import set_from_dict, set_to_dict
from .sets import (
    AffineSubspace,
    Ball,
    ConvexSet,
    DimensionMismatchError,
    HPolyhedron,
    Halfspace,
    Hyperplane,
    InfeasibleSetError,
    ProjectionNonConvergenceError,
    Translate,
    UnboundedSetError,
    VPolytope,
    Wedge,
    box,
)
from .verification import verify_suite

__version__ = "0.1.0"
