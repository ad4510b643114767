"""corrdyn: numerics for a one-parameter family of (2:2) holomorphic
correspondences -- branch arithmetic, Klein-combination domain geometry,
limit-set and parameter-plane escape rendering, periodic points, Fatou
coordinates, and the parabolic quadratic family z + 1/z + A."""

__version__ = "0.1.0"

from ._engine import backend_name
from .correspondence import (
    INFINITY,
    PARABOLIC_POINT,
    PARABOLIC_PREIMAGE,
    BranchPair,
    MoebiusMap,
    Parameter,
    SingularDerivativeError,
    SpherePoint,
    TaylorJet,
    branch_derivative,
    coordinate_change,
    cov0_branches,
    cov_residual,
    f_images,
    f_preimages,
    forward_critical_points,
    j_involution,
    parabolic_jet,
    repelling_directions,
)
from .domains import KleinReport, StandardDomains, in_delta_cov, in_delta_j, klein_check, l_prime
from .dynamics import (
    Classification,
    PeriodicPoint,
    PetalExitError,
    StepKind,
    StepResult,
    Verdict,
    classify_backward,
    classify_forward,
    critical_orbit_classify,
    critical_value,
    fatou_abel_residual,
    fatou_repelling,
    find_periodic,
    forward_branch_step,
)
from .per11 import CapParameter, classify_filled_julia, p_step
from .render import (
    ImageGrid,
    RenderOptions,
    Viewport,
    encode_image,
    encode_png,
    encode_ppm,
    render_julia_per11,
    render_limit_set,
    render_mset,
    write_image,
)

__all__ = [name for name in dir() if not name.startswith("_")]
