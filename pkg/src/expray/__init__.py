"""Numerical toolkit for the exponential family E_kappa(z) = e^z + kappa."""
from .address import ExternalAddress
from .dynray import (
    RayPointResult,
    RayPolyline,
    SingularValueHit,
    inverse_branch,
    ray_derivative_kappa,
    ray_derivative_t,
    ray_point,
    ray_point_adaptive,
    trace_dynamic_ray,
)
from .expcore import (
    EscapeResult,
    Status,
    apply_map,
    potential_iter,
    potential_step,
    singular_orbit,
    singular_orbit_with_derivative,
)
from .fractaldim import (
    ParabolaRegion,
    box_count,
    box_dimension,
    build_cover_root,
    count_covering_squares,
    escape_set_sample,
    hausdorff_sum,
    parabola_contains,
    refine_cover,
)
from .pararay import (
    ParamRayPoint,
    classify_parabola_membership,
    derivative_growth_profile,
    singular_asymptotics_profile,
    solve_parameter_ray_point,
    trace_parameter_ray,
)

__version__ = "0.1.0"
